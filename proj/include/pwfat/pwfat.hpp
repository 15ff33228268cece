#pragma once

// Umbrella header for the library. The HTTP service lives in
// pwfat/service.hpp and is not included here.

#include "pwfat/alphabet.hpp"
#include "pwfat/cardinality.hpp"
#include "pwfat/complexity.hpp"
#include "pwfat/config.hpp"
#include "pwfat/engine.hpp"
#include "pwfat/error.hpp"
#include "pwfat/evaluator.hpp"
#include "pwfat/fat_oracle.hpp"
#include "pwfat/parser.hpp"
#include "pwfat/records.hpp"
#include "pwfat/rule.hpp"
#include "pwfat/strength.hpp"
#include "pwfat/utf8.hpp"
#include "pwfat/wordlist.hpp"

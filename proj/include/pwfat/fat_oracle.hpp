#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pwfat/cardinality.hpp"
#include "pwfat/error.hpp"
#include "pwfat/rule.hpp"
#include "pwfat/strength.hpp"
#include "pwfat/utf8.hpp"

namespace pwfat {

// FNV-1a over the UTF-8 bytes. Stand-in one-way transform: the experiment
// only compares protected forms for equality.
inline std::uint64_t fnv1a64(std::u32string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char byte : utf8::encode(text)) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    return h;
}

using ConcreteTransform = std::function<std::uint64_t(std::u32string_view)>;

struct ExperimentSpec {
    AlphabetRef alphabet;
    ProtectionFunction protection;
    ConcreteTransform transform = fnv1a64;
    AdversaryModel adversary;
    std::uint64_t target = 0;  // transform(p)
    Rational threshold_seconds = 1;
    std::optional<int> year;  // defaults to the adversary's baseline year
    std::uint64_t seed = 0;

    int evaluation_year() const { return year.value_or(adversary.baseline_year); }
};

struct ExperimentOutcome {
    int result = 0;
    BigInt guesses_used = 0;
    std::optional<std::u32string> cracked_candidate;
    Rational elapsed_simulated_seconds = 0;
};

// Guesses that complete strictly before T: ceil(T * rate) - 1. Matches the
// ttc >= T convention of fat_strength_test at the boundary.
inline BigInt guess_budget(const ExperimentSpec& spec) {
    if (spec.threshold_seconds <= 0) {
        throw ValidationError("threshold_seconds", "must be positive");
    }
    const Rational work = spec.threshold_seconds *
                          effective_guess_rate(spec.protection, spec.adversary, spec.evaluation_year());
    const BigInt num = boost::multiprecision::numerator(work);
    const BigInt den = boost::multiprecision::denominator(work);
    const BigInt ceiling = (num + den - 1) / den;
    return ceiling > 0 ? BigInt(ceiling - 1) : BigInt(0);
}

// Lexicographic unranking of permutation number `rank` of 0..n-1.
inline std::vector<std::size_t> nth_permutation(std::size_t n, std::uint64_t rank) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::uint64_t> factorial(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;
    rank %= factorial[n];
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = n; i >= 1; --i) {
        const std::uint64_t f = factorial[i - 1];
        const auto pick = static_cast<std::size_t>(rank / f);
        rank %= f;
        out.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

// The adversary's try-order. With a topology it is fixed; otherwise the
// rules are tried in permutation (seed mod n!), so any window of n!
// consecutive seeds covers every order exactly once. Beyond 20 rules the
// order is a seeded shuffle.
inline std::vector<RuleRef> attack_order(const AdversaryModel& adversary, std::uint64_t seed) {
    if (adversary.topology) {
        return adversary.topology->rules();
    }
    const auto& rules = adversary.rules.rules();
    std::vector<RuleRef> out;
    if (rules.size() <= 20) {
        for (std::size_t i : nth_permutation(rules.size(), seed)) out.push_back(rules[i]);
    } else {
        out = rules;
        std::mt19937_64 rng(seed);
        std::shuffle(out.begin(), out.end(), rng);
    }
    return out;
}

inline bool deterministic(const AdversaryModel& adversary) {
    return adversary.topology.has_value() || adversary.rules.size() <= 1;
}

// Simulated FAT experiment: replay rule outputs in order, protect each guess
// and compare to the target, stopping at a match or when the budget is spent.
inline ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
    const BigInt budget = guess_budget(spec);
    const Rational rate = effective_guess_rate(spec.protection, spec.adversary, spec.evaluation_year());
    ExperimentOutcome outcome;
    if (budget == 0) {
        return outcome;
    }
    for (const auto& rule : attack_order(spec.adversary, spec.seed)) {
        if (!rule->enumerable()) {
            throw ValidationError("rule." + rule->id(), "cannot be replayed: no enumerator");
        }
        bool exhausted = false;
        rule->enumerate([&](std::u32string_view candidate) {
            if (outcome.guesses_used == budget) {
                exhausted = true;
                return false;
            }
            ++outcome.guesses_used;
            if (spec.transform(candidate) == spec.target) {
                outcome.result = 1;
                outcome.cracked_candidate = std::u32string(candidate);
                return false;
            }
            return true;
        });
        if (outcome.result == 1 || exhausted) {
            break;
        }
    }
    outcome.elapsed_simulated_seconds = Rational(outcome.guesses_used) / rate;
    return outcome;
}

struct SecurityEstimate {
    bool secure = true;
    Rational mean = 0;  // fraction of trials that cracked
    std::size_t trials_run = 0;
};

// Empirical FAT-security: the experiment averaged over seeds
// spec.seed, spec.seed + 1, ...; secure iff the mean is below 1/2.
// Deterministic adversaries run a single trial.
inline SecurityEstimate fat_secure(std::string_view password, const ExperimentSpec& spec_without_target,
                                   std::size_t trials = 1) {
    if (trials < 1) {
        throw ValidationError("trials", "must be at least 1");
    }
    ExperimentSpec spec = spec_without_target;
    spec.target = spec.transform(utf8::decode(password));
    const std::size_t runs = deterministic(spec.adversary) ? 1 : trials;
    std::size_t cracked = 0;
    for (std::size_t t = 0; t < runs; ++t) {
        spec.seed = spec_without_target.seed + t;
        cracked += static_cast<std::size_t>(run_experiment(spec).result);
    }
    SecurityEstimate est;
    est.trials_run = runs;
    est.mean = Rational(cracked) / Rational(runs);
    est.secure = est.mean < Rational(1, 2);
    return est;
}

} // namespace pwfat

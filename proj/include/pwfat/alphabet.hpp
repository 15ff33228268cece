#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pwfat/error.hpp"
#include "pwfat/utf8.hpp"

namespace pwfat {

// Finite ordered set of unicode scalar values. The order given at
// construction is the enumeration order used by class rules.
class Alphabet {
public:
    Alphabet(std::string name, std::u32string characters)
        : name_(std::move(name)), characters_(std::move(characters)) {
        if (characters_.empty()) {
            throw ValidationError("alphabet", "must contain at least one character");
        }
        index_.reserve(characters_.size());
        for (std::size_t i = 0; i < characters_.size(); ++i) {
            if (!index_.emplace(characters_[i], i).second) {
                throw ValidationError("alphabet", "duplicate character in '" + name_ + "'");
            }
        }
    }

    static Alphabet from_utf8(std::string name, std::string_view characters) {
        return Alphabet(std::move(name), utf8::decode(characters));
    }

    const std::string& name() const noexcept { return name_; }
    const std::u32string& characters() const noexcept { return characters_; }
    std::size_t size() const noexcept { return characters_.size(); }

    bool contains(char32_t c) const { return index_.count(c) != 0; }

    bool contains_all(std::u32string_view text) const {
        return std::all_of(text.begin(), text.end(), [this](char32_t c) { return contains(c); });
    }

    // Position of c in enumeration order; size() when absent.
    std::size_t index_of(char32_t c) const {
        const auto it = index_.find(c);
        return it == index_.end() ? characters_.size() : it->second;
    }

private:
    std::string name_;
    std::u32string characters_;
    std::unordered_map<char32_t, std::size_t> index_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

namespace alphabets {

inline constexpr std::string_view kLower = "abcdefghijklmnopqrstuvwxyz";
inline constexpr std::string_view kUpper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
inline constexpr std::string_view kDigits = "0123456789";
inline constexpr std::string_view kSymbols = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~ ";

inline AlphabetRef make(std::string name, std::string_view characters) {
    return std::make_shared<const Alphabet>(Alphabet::from_utf8(std::move(name), characters));
}

inline AlphabetRef lower() { return make("lower", kLower); }
inline AlphabetRef upper() { return make("upper", kUpper); }
inline AlphabetRef digits() { return make("digits", kDigits); }
inline AlphabetRef alnum() {
    return make("alnum", std::string(kLower) + std::string(kUpper) + std::string(kDigits));
}
inline AlphabetRef printable() {
    return make("printable",
                std::string(kLower) + std::string(kUpper) + std::string(kDigits) + std::string(kSymbols));
}

// Named presets accepted by the config loader; nullptr when unknown.
inline AlphabetRef preset(std::string_view name) {
    if (name == "lower") return lower();
    if (name == "upper") return upper();
    if (name == "digits") return digits();
    if (name == "alnum") return alnum();
    if (name == "printable") return printable();
    return nullptr;
}

} // namespace alphabets

} // namespace pwfat

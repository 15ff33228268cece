#pragma once

#include <cmath>
#include <compare>
#include <concepts>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "pwfat/error.hpp"

namespace pwfat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// log2 of a positive big integer without overflowing double for huge values.
inline double log2_of(const BigInt& value) {
    if (value <= 0) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto msb = static_cast<long>(boost::multiprecision::msb(value));
    const long shift = msb > 60 ? msb - 60 : 0;
    const BigInt top = value >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline double log2_of(const Rational& value) {
    return log2_of(boost::multiprecision::numerator(value)) -
           log2_of(boost::multiprecision::denominator(value));
}

inline double to_double(const Rational& value) {
    if (value == 0) {
        return 0.0;
    }
    namespace mp = boost::multiprecision;
    const BigInt num = mp::abs(mp::numerator(value));
    const BigInt den = mp::denominator(value);
    // Scale so the integer quotient carries 64 significant bits, then let the
    // conversion and ldexp do the rounding.
    const long long shift = 64 - (static_cast<long long>(mp::msb(num)) - static_cast<long long>(mp::msb(den)));
    const BigInt q = shift >= 0 ? BigInt((num << shift) / den) : BigInt(num / (den << -shift));
    const double magnitude = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    return value < 0 ? -magnitude : magnitude;
}

inline BigInt pow_int(const BigInt& base, unsigned exponent) {
    return boost::multiprecision::pow(base, exponent);
}

// Exact parse of "123", "-4", "0.001", "2.5e-3", "1/3".
inline Rational parse_rational(std::string_view text) {
    const auto fail = [&] { return ValidationError("number", "cannot parse '" + std::string(text) + "'"); };
    if (text.empty()) {
        throw fail();
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) {
            throw fail();
        }
        return num / den;
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    long scale = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            any_digit = true;
            if (seen_point) {
                --scale;
            }
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) {
        throw fail();
    }
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') {
            throw fail();
        }
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        long exponent = 0;
        bool exp_digit = false;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9' || exponent > 100000) {
                throw fail();
            }
            exponent = exponent * 10 + (text[i] - '0');
            exp_digit = true;
        }
        if (!exp_digit) {
            throw fail();
        }
        scale += exp_negative ? -exponent : exponent;
    }
    Rational result(digits);
    if (scale > 0) {
        result *= Rational(pow_int(10, static_cast<unsigned>(scale)));
    } else if (scale < 0) {
        result /= Rational(pow_int(10, static_cast<unsigned>(-scale)));
    }
    return negative ? Rational(-result) : result;
}

inline std::string to_string(const Rational& value) {
    std::string out = boost::multiprecision::numerator(value).str();
    if (boost::multiprecision::denominator(value) != 1) {
        out += "/" + boost::multiprecision::denominator(value).str();
    }
    return out;
}

// Exact non-negative count, or the absorbing Unbounded element used for rules
// that cannot be sized (and for "rule does not generate p" in min-reductions).
class Cardinality {
public:
    Cardinality() = default;
    Cardinality(BigInt value) : value_(std::move(value)) {
        if (value_ < 0) {
            throw ValidationError("cardinality", "must be non-negative");
        }
    }
    template <std::integral I>
    Cardinality(I value) : Cardinality(BigInt(value)) {}

    static Cardinality unbounded() {
        Cardinality c;
        c.unbounded_ = true;
        return c;
    }

    bool is_unbounded() const noexcept { return unbounded_; }
    bool is_finite() const noexcept { return !unbounded_; }

    const BigInt& value() const {
        if (unbounded_) {
            throw std::logic_error("value() of an unbounded cardinality");
        }
        return value_;
    }

    double log2() const {
        return unbounded_ ? std::numeric_limits<double>::infinity() : log2_of(value_);
    }

    std::string to_string() const { return unbounded_ ? std::string("unbounded") : value_.str(); }

    friend Cardinality operator+(const Cardinality& a, const Cardinality& b) {
        if (a.unbounded_ || b.unbounded_) {
            return unbounded();
        }
        return Cardinality(a.value_ + b.value_);
    }

    // Unbounded absorbs multiplication as well, including by zero: an open
    // rule composed with an empty one is still treated as unsized.
    friend Cardinality operator*(const Cardinality& a, const Cardinality& b) {
        if (a.unbounded_ || b.unbounded_) {
            return unbounded();
        }
        return Cardinality(a.value_ * b.value_);
    }

    Cardinality& operator+=(const Cardinality& o) { return *this = *this + o; }
    Cardinality& operator*=(const Cardinality& o) { return *this = *this * o; }

    friend bool operator==(const Cardinality& a, const Cardinality& b) {
        return a.unbounded_ == b.unbounded_ && (a.unbounded_ || a.value_ == b.value_);
    }

    friend std::strong_ordering operator<=>(const Cardinality& a, const Cardinality& b) {
        if (a.unbounded_ || b.unbounded_) {
            return a.unbounded_ <=> b.unbounded_;
        }
        if (a.value_ < b.value_) {
            return std::strong_ordering::less;
        }
        return a.value_ == b.value_ ? std::strong_ordering::equal : std::strong_ordering::greater;
    }

private:
    BigInt value_ = 0;
    bool unbounded_ = false;
};

inline const Cardinality& min(const Cardinality& a, const Cardinality& b) { return b < a ? b : a; }

} // namespace pwfat

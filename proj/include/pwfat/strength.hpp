#pragma once

#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pwfat/cardinality.hpp"
#include "pwfat/error.hpp"
#include "pwfat/rule.hpp"

namespace pwfat {

// Storage transform F, priced as seconds per guess at baseline compute
// relative to a unit-cost hash.
struct ProtectionFunction {
    std::string id;
    Rational cost_seconds_per_guess = 1;
    std::string description;

    void validate() const {
        if (cost_seconds_per_guess <= 0) {
            throw ValidationError("protection." + id, "cost_model_seconds_per_guess must be positive");
        }
    }
};

namespace protection_presets {

inline ProtectionFunction fast_hash() { return {"fast-hash", 1, "unsalted fast hash (MD5/SHA-1 class)"}; }

inline ProtectionFunction iterated_hash(unsigned iterations) {
    return {"iterated-hash-" + std::to_string(iterations), Rational(iterations),
            "salted hash iterated " + std::to_string(iterations) + " times"};
}

inline ProtectionFunction memory_hard_kdf() { return {"memory-hard-kdf", 1000000, "memory-hard KDF (scrypt/Argon2 class)"}; }

inline std::vector<ProtectionFunction> catalog() { return {fast_hash(), iterated_hash(10000), memory_hard_kdf()}; }

} // namespace protection_presets

// 2^(offset / period). Exact whenever the exponent is an integer, otherwise a
// 300-bit binary approximation.
inline Rational doubling_factor(const Rational& offset_years, const Rational& period_years) {
    if (period_years <= 0) {
        throw ValidationError("scaling.doubling_period_years", "must be positive");
    }
    const Rational exponent = offset_years / period_years;
    const BigInt whole = boost::multiprecision::numerator(exponent) / boost::multiprecision::denominator(exponent);
    const Rational frac = exponent - Rational(whole);
    auto pow2 = [](const BigInt& e) {
        const auto shift = static_cast<unsigned>(boost::multiprecision::abs(e));
        const Rational p(BigInt(1) << shift);
        return e >= 0 ? p : Rational(1) / p;
    };
    Rational result = pow2(whole);
    if (frac != 0) {
        using Float = boost::multiprecision::cpp_bin_float_100;
        const Float f = boost::multiprecision::pow(
            Float(2), Float(boost::multiprecision::numerator(frac)) / Float(boost::multiprecision::denominator(frac)));
        constexpr int kBits = 300;
        const Float shifted = boost::multiprecision::ldexp(f, kBits);
        const BigInt scaled = static_cast<BigInt>(shifted);
        result *= Rational(scaled) / Rational(BigInt(1) << kBits);
    }
    return result;
}

// Relative compute power under Moore's law: doubling every two years.
inline Rational moore_scaling(int baseline_year, int year) {
    if (year < baseline_year) {
        throw ValidationError("year", "precedes the baseline year");
    }
    return doubling_factor(Rational(year - baseline_year), Rational(2));
}

struct DoublingScaling {
    Rational period_years = 2;
};

// Step function: the factor of the latest listed year <= t (the first entry
// for earlier years).
struct TableScaling {
    std::map<int, Rational> factors;
};

struct CustomScaling {
    std::function<Rational(int)> factor;
};

using ComputeScaling = std::variant<DoublingScaling, TableScaling, CustomScaling>;

struct ConstantParallelism {
    BigInt processors = 1;
};

struct TableParallelism {
    std::map<int, BigInt> processors;
};

struct CustomParallelism {
    std::function<BigInt(int)> processors;
};

using Parallelism = std::variant<ConstantParallelism, TableParallelism, CustomParallelism>;

// Divide: compute power shortens the attack (default). Literal: s(t) is a
// multiplier beside F, kept for comparison with the unrearranged formula.
enum class ScalingPlacement { Divide, Literal };

namespace detail {

template <typename V>
const V& step_lookup(const std::map<int, V>& table, int year, const char* field) {
    if (table.empty()) {
        throw ValidationError(field, "table must not be empty");
    }
    auto it = table.upper_bound(year);
    if (it == table.begin()) {
        return it->second;
    }
    return std::prev(it)->second;
}

} // namespace detail

// Everything the attacker brings: baseline guess rate, how compute grows,
// how many processors run in parallel, and the rules it guesses with.
struct AdversaryModel {
    std::string id = "adversary";
    int baseline_year = 2015;
    Rational baseline_guess_rate = 1000;  // guesses/s against unit-cost F
    ComputeScaling scaling = DoublingScaling{};
    Parallelism parallelism = ConstantParallelism{};
    ScalingPlacement placement = ScalingPlacement::Divide;
    RuleCombination rules;
    std::optional<Topology> topology;  // absent: rule order is randomized per trial
    std::map<std::string, std::string> aux;

    Rational scaling_at(int year) const {
        const Rational s = std::visit(
            [&](const auto& sc) -> Rational {
                using T = std::decay_t<decltype(sc)>;
                if constexpr (std::is_same_v<T, DoublingScaling>) {
                    return doubling_factor(Rational(year - baseline_year), sc.period_years);
                } else if constexpr (std::is_same_v<T, TableScaling>) {
                    return detail::step_lookup(sc.factors, year, "scaling.table");
                } else {
                    return sc.factor(year);
                }
            },
            scaling);
        if (s <= 0) {
            throw ValidationError("scaling", "must be positive");
        }
        return s;
    }

    BigInt parallelism_at(int year) const {
        const BigInt p = std::visit(
            [&](const auto& par) -> BigInt {
                using T = std::decay_t<decltype(par)>;
                if constexpr (std::is_same_v<T, ConstantParallelism>) {
                    return par.processors;
                } else if constexpr (std::is_same_v<T, TableParallelism>) {
                    return detail::step_lookup(par.processors, year, "parallelism.table");
                } else {
                    return par.processors(year);
                }
            },
            parallelism);
        if (p < 1) {
            throw ValidationError("parallelism", "must be at least 1");
        }
        return p;
    }

    void validate() const {
        if (baseline_guess_rate <= 0) {
            throw ValidationError("adversary." + id, "baseline_guess_rate must be positive");
        }
    }
};

namespace adversary_presets {

inline AdversaryModel commodity() {
    AdversaryModel a;
    a.id = "commodity";
    a.baseline_guess_rate = 1000;
    return a;
}

inline AdversaryModel state_actor() {
    AdversaryModel a;
    a.id = "state-actor";
    a.baseline_guess_rate = Rational(BigInt(1000000000000ULL));
    return a;
}

inline std::vector<AdversaryModel> catalog() { return {commodity(), state_actor()}; }

} // namespace adversary_presets

// Seconds, or Unbounded for an unsized search space.
struct TimeToCrack {
    bool unbounded = false;
    Rational seconds = 0;

    double approx_seconds() const {
        return unbounded ? std::numeric_limits<double>::infinity() : to_double(seconds);
    }
};

inline void require_not_before_baseline(const AdversaryModel& adversary, int year) {
    if (year < adversary.baseline_year) {
        throw ValidationError("year", "precedes the adversary baseline year " + std::to_string(adversary.baseline_year));
    }
}

// Guesses per second the adversary sustains against f in `year`.
inline Rational effective_guess_rate(const ProtectionFunction& f, const AdversaryModel& adversary, int year) {
    f.validate();
    adversary.validate();
    require_not_before_baseline(adversary, year);
    const Rational s = adversary.scaling_at(year);
    const Rational mu(adversary.parallelism_at(year));
    const Rational r0 = adversary.baseline_guess_rate;
    if (adversary.placement == ScalingPlacement::Divide) {
        return r0 * s * mu / f.cost_seconds_per_guess;
    }
    return r0 * mu / (f.cost_seconds_per_guess * s);
}

// (F cost * eta) / (r0 * s(t) * mu_p(t)) under the default placement.
inline TimeToCrack time_to_crack(const Cardinality& eta, const ProtectionFunction& f, const AdversaryModel& adversary,
                                 int year) {
    const Rational rate = effective_guess_rate(f, adversary, year);
    if (eta.is_unbounded()) {
        return {true, 0};
    }
    return {false, Rational(eta.value()) / rate};
}

enum class Hypothesis { H0, H1 };

inline std::string_view to_string(Hypothesis h) { return h == Hypothesis::H1 ? "H1" : "H0"; }

struct StrengthVerdict {
    Hypothesis hypothesis = Hypothesis::H0;
    TimeToCrack estimated_ttc;
    Rational threshold_seconds;
    int evaluation_year = 0;
    Cardinality eta_used;
    std::string protection_id;
    std::string adversary_id;

    bool fat_strong() const noexcept { return hypothesis == Hypothesis::H1; }
};

// H1 (FAT-strong) iff the estimated time-to-crack is at least T.
inline StrengthVerdict fat_strength_test(const Cardinality& eta, const ProtectionFunction& f,
                                         const AdversaryModel& adversary, int year, const Rational& threshold_seconds) {
    if (threshold_seconds <= 0) {
        throw ValidationError("threshold_seconds", "must be positive");
    }
    StrengthVerdict v;
    v.estimated_ttc = time_to_crack(eta, f, adversary, year);
    v.threshold_seconds = threshold_seconds;
    v.evaluation_year = year;
    v.eta_used = eta;
    v.protection_id = f.id;
    v.adversary_id = adversary.id;
    v.hypothesis = (v.estimated_ttc.unbounded || v.estimated_ttc.seconds >= threshold_seconds) ? Hypothesis::H1
                                                                                              : Hypothesis::H0;
    return v;
}

} // namespace pwfat

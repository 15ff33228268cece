#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwfat/alphabet.hpp"
#include "pwfat/cardinality.hpp"
#include "pwfat/error.hpp"
#include "pwfat/parser.hpp"
#include "pwfat/rule.hpp"

namespace pwfat {

// Password policy: lengths k..l over the policy alphabet.
struct PolicyBounds {
    std::size_t min_length = 1;
    std::size_t max_length = 1;
    AlphabetRef alphabet;

    PolicyBounds() = default;
    PolicyBounds(std::size_t k, std::size_t l, AlphabetRef a) : min_length(k), max_length(l), alphabet(std::move(a)) {
        validate();
    }

    void validate() const {
        if (!alphabet) throw ValidationError("policy.alphabet", "is required");
        if (min_length < 1) throw ValidationError("policy.min_length", "must be at least 1");
        if (min_length > max_length) throw ValidationError("policy", "min_length exceeds max_length");
    }
};

// Size of the whole search space: sum of |alphabet|^i for i in [k, l].
inline Cardinality eta_upper(const PolicyBounds& bounds) {
    bounds.validate();
    const BigInt base = bounds.alphabet->size();
    BigInt term = pow_int(base, static_cast<unsigned>(bounds.min_length));
    BigInt total = 0;
    for (std::size_t i = bounds.min_length; i <= bounds.max_length; ++i) {
        total += term;
        term *= base;
    }
    return Cardinality(total);
}

// Smallest member rule generating the whole password, else the upper bound.
inline Cardinality eta_lower_rule(std::string_view password, const RuleCombination& combination,
                                  const PolicyBounds& bounds) {
    const std::u32string text = detail::require_password(password);
    const Cardinality upper = eta_upper(bounds);
    Cardinality best = Cardinality::unbounded();
    for (const auto& rule : combination.rules()) {
        if (rule->generates(text)) {
            best = min(best, rule->cardinality());
        }
    }
    return min(best, upper);
}

struct SegmentCost {
    std::u32string segment;
    std::optional<std::string> rule_id;  // nullopt: brute-force fallback
    Cardinality cost;
};

struct ChainResult {
    Cardinality eta;       // min(uncapped, eta_upper)
    Cardinality uncapped;  // exact cost of `parsing`
    Parsing parsing;
    std::vector<SegmentCost> per_segment;
    // The segment limit excluded a composition that is strictly cheaper, so
    // eta is only an upper bound on the unrestricted minimum.
    bool truncated = false;
    bool capped = false;
};

namespace detail {

// Cheapest way to produce one segment: the smallest generating rule, or
// |alphabet|^len when that is cheaper or nothing matches. Rules win ties.
inline SegmentCost price_segment(std::u32string_view segment, const RuleCombination& combination,
                                 const BigInt& alphabet_size) {
    SegmentCost out{std::u32string(segment), std::nullopt,
                    Cardinality(pow_int(alphabet_size, static_cast<unsigned>(segment.size())))};
    const RuleRef* best = nullptr;
    for (const auto& rule : combination.rules()) {
        if (rule->generates(segment) && (!best || rule->cardinality() < (*best)->cardinality())) {
            best = &rule;
        }
    }
    if (best && (*best)->cardinality() <= out.cost) {
        out.rule_id = (*best)->id();
        out.cost = (*best)->cardinality();
    }
    return out;
}

} // namespace detail

// Chain-rule complexity: minimum over compositions (at most
// limits.max_segments pieces) of the product of per-segment prices, capped at
// eta_upper. Solved by dynamic programming over suffixes; ties go to fewer
// segments, then to the earliest composition in enumeration order.
inline ChainResult eta_chain(std::string_view password, const RuleCombination& combination,
                             const PolicyBounds& bounds, const EnumerationLimits& limits = {}) {
    const std::u32string text = detail::require_password(password);
    if (limits.max_segments < 1) {
        throw ValidationError("limits.max_segments", "must be at least 1");
    }
    const Cardinality upper = eta_upper(bounds);
    const std::size_t n = text.size();
    const BigInt alpha = bounds.alphabet->size();

    // price[i][len-1] for segment text[i, i+len)
    std::vector<std::vector<SegmentCost>> price(n);
    for (std::size_t i = 0; i < n; ++i) {
        price[i].reserve(n - i);
        for (std::size_t len = 1; i + len <= n; ++len) {
            price[i].push_back(detail::price_segment(std::u32string_view(text).substr(i, len), combination, alpha));
        }
    }
    const auto cost = [&](std::size_t i, std::size_t j) -> const BigInt& { return price[i][j - i - 1].cost.value(); };

    const std::size_t top = std::min(n, limits.max_segments);
    // suffix[m][i]: cheapest split of text[i, n) into exactly m segments
    std::vector<std::vector<std::optional<BigInt>>> suffix(top + 1, std::vector<std::optional<BigInt>>(n + 1));
    for (std::size_t i = 0; i < n; ++i) suffix[1][i] = cost(i, n);
    for (std::size_t m = 2; m <= top; ++m) {
        for (std::size_t i = 0; i + m <= n; ++i) {
            std::optional<BigInt> best;
            for (std::size_t j = i + 1; j + (m - 1) <= n; ++j) {
                if (!suffix[m - 1][j]) continue;
                BigInt candidate = cost(i, j) * *suffix[m - 1][j];
                if (!best || candidate < *best) best = std::move(candidate);
            }
            suffix[m][i] = std::move(best);
        }
    }

    std::size_t best_m = 1;
    for (std::size_t m = 2; m <= top; ++m) {
        if (suffix[m][0] && *suffix[m][0] < *suffix[best_m][0]) best_m = m;
    }
    const BigInt target = *suffix[best_m][0];

    ChainResult result;
    std::size_t i = 0;
    BigInt remaining = target;
    for (std::size_t r = best_m; r >= 1; --r) {
        std::size_t j = n;
        if (r > 1) {
            for (j = i + 1; j + (r - 1) <= n; ++j) {
                if (suffix[r - 1][j] && cost(i, j) * *suffix[r - 1][j] == remaining) break;
            }
            remaining /= cost(i, j);
        }
        result.per_segment.push_back(price[i][j - i - 1]);
        result.parsing.segments.push_back(text.substr(i, j - i));
        i = j;
    }

    result.uncapped = Cardinality(target);
    result.eta = min(result.uncapped, upper);
    result.capped = result.eta < result.uncapped;

    if (top < n) {
        // unrestricted optimum, to tell whether the limit changed the answer
        std::vector<BigInt> best(n + 1);
        best[n] = 1;
        for (std::size_t s = n; s-- > 0;) {
            best[s] = cost(s, n);
            for (std::size_t j = s + 1; j < n; ++j) {
                BigInt candidate = cost(s, j) * best[j];
                if (candidate < best[s]) best[s] = std::move(candidate);
            }
        }
        result.truncated = min(Cardinality(best[0]), upper) < result.eta;
    }
    return result;
}

// Guesses spent by an attacker walking the topology until the first rule that
// generates the password (inclusive), capped at eta_upper. Unbounded rules
// before a match, or no match at all, give eta_upper.
inline Cardinality eta_order_aware(std::string_view password, const Topology& topology, const PolicyBounds& bounds) {
    if (topology.empty()) {
        throw ValidationError("topology", "must not be empty");
    }
    const std::u32string text = detail::require_password(password);
    const Cardinality upper = eta_upper(bounds);
    Cardinality spent(0);
    for (const auto& rule : topology.rules()) {
        spent += rule->cardinality();
        if (rule->generates(text)) {
            return min(spent, upper);
        }
    }
    return upper;
}

// Minimum of eta_order_aware over every ordering of the combination. Putting
// the smallest generating rule first is optimal, so this reduces to the
// smallest generating rule's size.
inline Cardinality eta_order_unknown(std::string_view password, const RuleCombination& combination,
                                     const PolicyBounds& bounds) {
    if (combination.empty()) {
        throw ValidationError("combination", "must not be empty");
    }
    return eta_lower_rule(password, combination, bounds);
}

struct ComplexityReport {
    Cardinality eta_upper;
    Cardinality eta_lower_rule;
    Cardinality eta_chain;
    std::optional<Cardinality> eta_order_aware;
    Cardinality eta_order_unknown;
    Cardinality eta_final;  // minimum of the estimates above
    double normalized = 0.0;
    std::optional<Parsing> minimizing_parsing;
    std::vector<SegmentCost> per_segment_costs;
    bool truncated = false;
};

// log2(eta) / log2(upper), clamped to [0, 1]; 0 when the space has one element.
inline double normalized_complexity(const Cardinality& eta, const Cardinality& upper) {
    if (upper.is_unbounded() || upper.value() <= 1) {
        return 0.0;
    }
    const double ratio = eta.log2() / upper.log2();
    return std::clamp(ratio, 0.0, 1.0);
}

inline ComplexityReport complexity_report(std::string_view password, const RuleCombination& combination,
                                          const PolicyBounds& bounds, const Topology* topology = nullptr,
                                          const EnumerationLimits& limits = {}) {
    ComplexityReport report;
    report.eta_upper = eta_upper(bounds);
    report.eta_lower_rule = eta_lower_rule(password, combination, bounds);
    ChainResult chain = eta_chain(password, combination, bounds, limits);
    report.eta_chain = chain.eta;
    report.minimizing_parsing = std::move(chain.parsing);
    report.per_segment_costs = std::move(chain.per_segment);
    report.truncated = chain.truncated;
    report.eta_order_unknown = combination.empty() ? report.eta_upper
                                                   : eta_order_unknown(password, combination, bounds);
    report.eta_final = min(min(report.eta_lower_rule, report.eta_chain), report.eta_order_unknown);
    if (topology && !topology->empty()) {
        report.eta_order_aware = eta_order_aware(password, *topology, bounds);
        report.eta_final = min(report.eta_final, *report.eta_order_aware);
    }
    report.normalized = normalized_complexity(report.eta_final, report.eta_upper);
    return report;
}

} // namespace pwfat

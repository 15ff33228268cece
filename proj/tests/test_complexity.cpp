#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pwfat/pwfat.hpp"

using namespace pwfat;

namespace {

std::vector<std::string> twenty_thousand_words() {
    std::vector<std::string> out{"Love", "Soccer"};
    for (int i = 0; out.size() < 20000; ++i) out.push_back("w" + std::to_string(i));
    return out;
}

const RuleRef& words20k() {
    static const RuleRef r = Rule::wordlist("wordlist", alphabets::alnum(), twenty_thousand_words());
    return r;
}

RuleRef digits(std::size_t lo, std::size_t hi) { return Rule::char_class("digits", alphabets::digits(), lo, hi); }

PolicyBounds alnum_policy() { return PolicyBounds(1, 16, alphabets::alnum()); }

Cardinality product(const std::vector<SegmentCost>& costs) {
    Cardinality total(1);
    for (const auto& c : costs) total *= c.cost;
    return total;
}

} // namespace

TEST(EtaUpper, LowercaseLengthEight) {
    EXPECT_EQ(eta_upper(PolicyBounds(8, 8, alphabets::lower())), Cardinality(BigInt("208827064576")));
}

TEST(EtaUpper, TinyAlphabet) {
    EXPECT_EQ(eta_upper(PolicyBounds(1, 2, std::make_shared<Alphabet>("ab", U"ab"))), Cardinality(6));
}

TEST(EtaUpper, AlnumSixToFifteenMatchesSummationLoop) {
    EXPECT_EQ(eta_upper(PolicyBounds(6, 15, alphabets::alnum())), Cardinality(oracle::geometric_sum(62, 6, 15)));
}

TEST(EtaUpper, InvalidBoundsRejected) {
    EXPECT_THROW(PolicyBounds(0, 4, alphabets::lower()), ValidationError);
    EXPECT_THROW(PolicyBounds(5, 4, alphabets::lower()), ValidationError);
    EXPECT_THROW(PolicyBounds(1, 4, nullptr), ValidationError);
}

TEST(EtaLowerRule, DigitsWinForDigitString) {
    const RuleCombination combo({digits(1, 4), words20k()});
    EXPECT_EQ(eta_lower_rule("555", combo, alnum_policy()), Cardinality(oracle::geometric_sum(10, 1, 4)));
    EXPECT_EQ(eta_lower_rule("555", combo, alnum_policy()), Cardinality(11110));
}

TEST(EtaLowerRule, WordlistMember) {
    EXPECT_EQ(eta_lower_rule("Love", RuleCombination({words20k()}), alnum_policy()), Cardinality(20000));
}

TEST(EtaLowerRule, NoGeneratingRuleFallsBackToUpper) {
    const RuleCombination combo({digits(1, 4), words20k()});
    const PolicyBounds bounds(1, 16, alphabets::printable());
    EXPECT_EQ(eta_lower_rule("zqx9!", combo, bounds), eta_upper(bounds));
    EXPECT_THROW(eta_lower_rule("", combo, bounds), ValidationError);
}

TEST(EtaChain, DigitWordWordExample) {
    const auto started = std::chrono::steady_clock::now();
    const RuleCombination combo({digits(1, 1), words20k()});
    const auto r = eta_chain("1LoveSoccer", combo, alnum_policy());
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    EXPECT_EQ(r.eta, Cardinality(BigInt(10) * 20000 * 20000));
    EXPECT_NEAR(r.eta.log2(), 31.8974, 1e-4);
    EXPECT_NEAR(r.eta.log2(), std::log2(10.0 * 20000 * 20000), 1e-12);
    EXPECT_EQ(to_line(r.parsing), "1|Love|Soccer");
    ASSERT_EQ(r.per_segment.size(), 3u);
    EXPECT_EQ(r.per_segment[0].rule_id, std::optional<std::string>("digits"));
    EXPECT_EQ(r.per_segment[1].rule_id, std::optional<std::string>("wordlist"));
    EXPECT_EQ(r.per_segment[2].cost, Cardinality(20000));
    EXPECT_FALSE(r.truncated);
    EXPECT_FALSE(r.capped);
    EXPECT_LT(elapsed, 1.0);
}

// Pricing "1|Lov|eSoccer" segment by segment. Brute-forcing every segment
// gives 62^11 (65.4962 bits); taking the cheaper option for "1" gives
// 10 * 62^10 (about 62.864 bits). The engine uses the minimum.
TEST(EtaChain, AlternativeParsingUsesCheapestOptionPerSegment) {
    const RuleCombination combo({digits(1, 1), words20k()});
    const BigInt alpha = 62;
    Cardinality cost(1);
    for (const char* seg : {"1", "Lov", "eSoccer"}) {
        cost *= detail::price_segment(utf8::decode(seg), combo, alpha).cost;
    }
    EXPECT_EQ(cost, Cardinality(10 * oracle::power(62, 10)));
    EXPECT_NEAR(cost.log2(), 62.8639, 1e-4);
    EXPECT_NEAR(Cardinality(oracle::power(62, 11)).log2(), 65.4962, 1e-4);
    EXPECT_LT(eta_chain("1LoveSoccer", combo, alnum_policy()).eta, cost);
}

TEST(EtaChain, SingleUnmatchedCharacterCostsAlphabetSize) {
    const auto r = eta_chain("a", RuleCombination({digits(1, 4)}), alnum_policy());
    EXPECT_EQ(r.eta, Cardinality(62));
    EXPECT_FALSE(r.per_segment[0].rule_id.has_value());
}

TEST(EtaChain, EmptyCombinationIsPureBruteForce) {
    const auto r = eta_chain("abc", RuleCombination(), alnum_policy());
    EXPECT_EQ(r.eta, Cardinality(62 * 62 * 62));
    EXPECT_EQ(to_line(r.parsing), "abc");
}

// Every password of length <= 3 over {a, b, 1} with a digit rule and the
// wordlist {"ab"}, against the exhaustive composition-and-assignment search.
TEST(EtaChain, MatchesBruteForceOnToyAlphabet) {
    const std::u32string chars = U"ab1";
    const auto alphabet = std::make_shared<Alphabet>("ab1", chars);
    const std::vector<oracle::ToyRule> toys{{"digits", true, U"1", 1, 4, {}}, {"tiny", false, {}, 0, 0, {U"ab"}}};
    const auto combo = oracle::build_all(toys, alphabet);
    const PolicyBounds bounds(1, 3, alphabet);
    const BigInt upper = oracle::geometric_sum(3, 1, 3);
    for (const auto& pw : oracle::all_strings(chars, 1, 3)) {
        const auto expected = oracle::brute_chain(pw, toys, 3);
        const auto r = eta_chain(utf8::encode(pw), combo, bounds);
        ASSERT_EQ(r.eta, Cardinality(std::min(expected.cost, upper))) << utf8::encode(pw);
        ASSERT_EQ(r.uncapped, Cardinality(expected.cost));
        ASSERT_EQ(r.parsing.segments, expected.segments) << utf8::encode(pw);
    }
}

TEST(EtaChain, CapsAtUpperBound) {
    const auto alphabet = std::make_shared<Alphabet>("ab", U"ab");
    // no rules: a 3-char password costs 2^3 = 8 but the policy space is 2 + 4 + 8 = 14; with k = l = 3 it is 8
    const auto r = eta_chain("aba", RuleCombination(), PolicyBounds(3, 3, alphabet));
    EXPECT_EQ(r.eta, Cardinality(8));
    // a rule priced above the whole space
    const auto big = Rule::wordlist("big", alphabet, std::vector<std::string>{"a", "b", "aa", "ab", "ba", "bb", "aba",
                                                                             "abb", "baa", "bab", "bba", "bbb", "aaa"});
    const auto capped = eta_chain("aba", RuleCombination({big}), PolicyBounds(3, 3, alphabet));
    EXPECT_EQ(capped.eta, Cardinality(8));
}

TEST(EtaChain, SegmentLimitFlagsUpperBoundOnly) {
    const RuleCombination combo({digits(1, 1)});
    EnumerationLimits two;
    two.max_segments = 2;
    const auto limited = eta_chain("1234567890", combo, alnum_policy(), two);
    EXPECT_TRUE(limited.truncated);
    EXPECT_LE(limited.parsing.segments.size(), 2u);
    const auto free = eta_chain("1234567890", combo, alnum_policy(), EnumerationLimits{16, 1 << 20});
    EXPECT_FALSE(free.truncated);
    EXPECT_EQ(free.eta, Cardinality(oracle::power(10, 10)));
    EXPECT_LT(free.eta, limited.eta);
    // the limit binds on count but not on the minimum
    const auto harmless = eta_chain("abcdefghij", combo, alnum_policy(), two);
    EXPECT_FALSE(harmless.truncated);
}

TEST(EtaOrderAware, SumsUpToGeneratingRule) {
    const Topology topo({digits(1, 4), words20k()});
    EXPECT_EQ(eta_order_aware("Love", topo, alnum_policy()), Cardinality(31110));
    // cross-check: with the toy replay order, Love's last possible guess index is the sum
    std::vector<oracle::ToyRule> order{{"digits", true, U"0123456789", 1, 4, {}}, {"w", false, {}, 0, 0, {}}};
    for (const auto& w : twenty_thousand_words()) order[1].words.push_back(utf8::decode(w));
    EXPECT_EQ(oracle::order_sum(U"Love", order), BigInt(31110));
    EXPECT_EQ(oracle::guess_position(U"Love", order), BigInt(11111));
}

TEST(EtaOrderAware, SingleRuleTopologyReducesToRuleSize) {
    EXPECT_EQ(eta_order_aware("Love", Topology({words20k()}), alnum_policy()), Cardinality(20000));
}

TEST(EtaOrderAware, NoGeneratingRuleGivesUpper) {
    EXPECT_EQ(eta_order_aware("Love", Topology({digits(1, 4)}), alnum_policy()), eta_upper(alnum_policy()));
    EXPECT_THROW(eta_order_aware("Love", Topology(), alnum_policy()), ValidationError);
}

TEST(EtaOrderAware, UnboundedRuleBeforeMatchGivesUpper) {
    const auto open = Rule::external("model", alphabets::alnum(), Cardinality::unbounded(),
                                     [](std::u32string_view) { return false; });
    EXPECT_EQ(eta_order_aware("Love", Topology({open, words20k()}), alnum_policy()), eta_upper(alnum_policy()));
}

TEST(EtaOrderUnknown, BestOrderPutsWordlistFirst) {
    const RuleCombination combo({digits(1, 4), words20k()});
    const auto both_orders = std::min(eta_order_aware("Love", Topology({digits(1, 4), words20k()}), alnum_policy()),
                                      eta_order_aware("Love", Topology({words20k(), digits(1, 4)}), alnum_policy()));
    EXPECT_EQ(both_orders, Cardinality(20000));
    EXPECT_EQ(eta_order_unknown("Love", combo, alnum_policy()), Cardinality(20000));
}

TEST(EtaOrderUnknown, NoGeneratingRuleGivesUpper) {
    EXPECT_EQ(eta_order_unknown("zz!", RuleCombination({digits(1, 4)}), PolicyBounds(1, 8, alphabets::printable())),
              eta_upper(PolicyBounds(1, 8, alphabets::printable())));
    EXPECT_THROW(eta_order_unknown("a", RuleCombination(), alnum_policy()), ValidationError);
}

TEST(EtaOrderUnknown, SingletonEqualsOrderAware) {
    EXPECT_EQ(eta_order_unknown("Love", RuleCombination({words20k()}), alnum_policy()),
              eta_order_aware("Love", Topology({words20k()}), alnum_policy()));
}

// The closed form must equal the minimum over all orderings, checked by
// enumerating every permutation of small random rule sets.
TEST(EtaOrderUnknown, EqualsMinimumOverAllPermutations) {
    oracle::Gen gen(99);
    const std::u32string chars = U"abc";
    const auto alphabet = std::make_shared<Alphabet>("abc", chars);
    const PolicyBounds bounds(1, 3, alphabet);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<RuleRef> rules;
        for (std::size_t i = 0, n = gen.uniform(1, 4); i < n; ++i) {
            rules.push_back(gen.rule("r" + std::to_string(i), chars, 3).build(alphabet));
        }
        const std::string pw = utf8::encode(gen.string_over(chars, gen.uniform(1, 3)));
        std::vector<std::size_t> idx(rules.size());
        std::iota(idx.begin(), idx.end(), 0);
        Cardinality best = Cardinality::unbounded();
        do {
            std::vector<RuleRef> ordered;
            for (auto i : idx) ordered.push_back(rules[i]);
            best = min(best, eta_order_aware(pw, Topology(ordered), bounds));
        } while (std::next_permutation(idx.begin(), idx.end()));
        ASSERT_EQ(eta_order_unknown(pw, RuleCombination(rules), bounds), best);
    }
}

TEST(Normalized, OneElementSpaceIsZero) {
    const auto single = std::make_shared<Alphabet>("x", U"x");
    const auto report = complexity_report("x", RuleCombination(), PolicyBounds(1, 1, single));
    EXPECT_EQ(report.eta_upper, Cardinality(1));
    EXPECT_EQ(report.normalized, 0.0);
}

TEST(Normalized, UnmatchedPasswordAtPolicyLengthIsOne) {
    const PolicyBounds bounds(5, 5, alphabets::alnum());
    const auto report = complexity_report("zQ9xw", RuleCombination({digits(1, 4)}), bounds);
    EXPECT_EQ(report.eta_final, report.eta_upper);
    EXPECT_DOUBLE_EQ(report.normalized, 1.0);
}

TEST(Normalized, IsBitRatio) {
    const auto report = complexity_report("1LoveSoccer", RuleCombination({digits(1, 1), words20k()}), alnum_policy());
    EXPECT_NEAR(report.normalized, report.eta_final.log2() / report.eta_upper.log2(), 1e-12);
    EXPECT_GT(report.normalized, 0.0);
    EXPECT_LT(report.normalized, 1.0);
}

TEST(ComplexityReport, FinalIsMinimumOfEstimates) {
    const RuleCombination combo({digits(1, 4), words20k()});
    const Topology topo({digits(1, 4), words20k()});
    const auto r = complexity_report("Love", combo, alnum_policy(), &topo);
    ASSERT_TRUE(r.eta_order_aware.has_value());
    EXPECT_EQ(*r.eta_order_aware, Cardinality(31110));
    EXPECT_EQ(r.eta_lower_rule, Cardinality(20000));
    EXPECT_EQ(r.eta_chain, Cardinality(20000));
    EXPECT_EQ(r.eta_final, Cardinality(20000));
    EXPECT_EQ(to_line(*r.minimizing_parsing), "Love");
}

// Bound ordering, argmin stability and oracle agreement on random small cases.
TEST(ComplexityProperties, BoundsArgminAndOracle) {
    oracle::Gen gen(2024);
    for (int trial = 0; trial < 400; ++trial) {
        const std::u32string chars = std::u32string(U"ab1z").substr(0, gen.uniform(1, 4));
        const auto alphabet = std::make_shared<Alphabet>("toy", chars);
        const std::size_t l = gen.uniform(1, 4);
        const PolicyBounds bounds(1, l, alphabet);
        std::vector<oracle::ToyRule> toys;
        for (std::size_t i = 0, n = gen.uniform(0, 3); i < n; ++i) toys.push_back(gen.rule("r" + std::to_string(i), chars, 3));
        const auto combo = oracle::build_all(toys, alphabet);
        const auto pw = gen.string_over(chars, gen.uniform(1, l));
        const auto r = complexity_report(utf8::encode(pw), combo, bounds);
        ASSERT_LE(r.eta_chain, r.eta_lower_rule);
        ASSERT_LE(r.eta_lower_rule, r.eta_upper);
        ASSERT_EQ(r.minimizing_parsing->joined(), pw);
        ASSERT_EQ(min(product(r.per_segment_costs), r.eta_upper), r.eta_chain);
        const auto expected = oracle::brute_chain(pw, toys, chars.size());
        ASSERT_EQ(r.eta_chain, min(Cardinality(expected.cost), r.eta_upper));
        ASSERT_EQ(r.minimizing_parsing->segments, expected.segments);
        const auto lower = oracle::smallest_generating(pw, toys);
        ASSERT_EQ(r.eta_lower_rule, lower ? min(Cardinality(*lower), r.eta_upper) : r.eta_upper);
    }
}

// Adding rules never raises any of the rule-driven estimates.
TEST(ComplexityProperties, AddingRulesNeverIncreasesEstimates) {
    oracle::Gen gen(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::u32string chars = std::u32string(U"abc1").substr(0, gen.uniform(2, 4));
        const auto alphabet = std::make_shared<Alphabet>("toy", chars);
        const PolicyBounds bounds(1, 4, alphabet);
        RuleCombination combo(std::vector<RuleRef>{gen.rule("base", chars, 3).build(alphabet)});
        const std::string pw = utf8::encode(gen.string_over(chars, gen.uniform(1, 4)));
        auto before = complexity_report(pw, combo, bounds);
        for (int step = 0; step < 3; ++step) {
            combo = combo.with(gen.rule("add" + std::to_string(step), chars, 3).build(alphabet));
            const auto after = complexity_report(pw, combo, bounds);
            ASSERT_LE(after.eta_lower_rule, before.eta_lower_rule);
            ASSERT_LE(after.eta_chain, before.eta_chain);
            ASSERT_LE(after.eta_order_unknown, before.eta_order_unknown);
            before = after;
        }
    }
}

// A new rule that generates the password and is smaller than the current
// estimate strictly lowers it.
TEST(ComplexityProperties, SmallerGeneratingRuleStrictlyDecreases) {
    oracle::Gen gen(8);
    const std::u32string chars = U"abc";
    const auto alphabet = std::make_shared<Alphabet>("abc", chars);
    const PolicyBounds bounds(1, 4, alphabet);
    for (int trial = 0; trial < 200; ++trial) {
        RuleCombination combo(std::vector<RuleRef>{gen.rule("base", chars, 4).build(alphabet)});
        const auto pw = gen.string_over(chars, gen.uniform(2, 4));
        const auto current = eta_lower_rule(utf8::encode(pw), combo, bounds);
        std::vector<std::u32string> words{pw};
        // pad with other words while staying strictly below the current estimate
        for (std::size_t extra = 0; Cardinality(extra + 2) < current && extra < 3; ++extra) {
            words.push_back(gen.string_over(chars, 4) + U"c");
        }
        const auto added = Rule::wordlist("known", alphabet, words);
        ASSERT_LT(added->cardinality(), current);
        ASSERT_LT(eta_lower_rule(utf8::encode(pw), combo.with(added), bounds), current);
    }
}

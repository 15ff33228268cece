#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pwfat/pwfat.hpp"

using namespace pwfat;

namespace {

std::vector<std::string> lines(const std::vector<Parsing>& parsings) {
    std::vector<std::string> out;
    for (const auto& p : parsings) out.push_back(to_line(p));
    return out;
}

// Reference ordering: by segment count, then by the cut vector.
std::vector<std::vector<std::size_t>> reference_cut_order(std::size_t n) {
    std::vector<std::vector<std::size_t>> all;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        std::vector<std::size_t> cuts;
        for (std::size_t b = 0; b + 1 < n; ++b) {
            if (mask & (std::uint64_t{1} << b)) cuts.push_back(b + 1);
        }
        all.push_back(cuts);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return all;
}

std::vector<std::size_t> cuts_of(const Parsing& p) {
    std::vector<std::size_t> cuts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < p.segments.size(); ++i) {
        pos += p.segments[i].size();
        cuts.push_back(pos);
    }
    return cuts;
}

RuleCombination digits_and_words() {
    std::vector<std::string> words{"Love", "Soccer"};
    for (int i = 0; words.size() < 20000; ++i) words.push_back("x" + std::to_string(i));
    return RuleCombination({Rule::char_class("digits", alphabets::digits(), 1, 1),
                            Rule::wordlist("wordlist", alphabets::alnum(), words)});
}

} // namespace

TEST(EnumerateParsings, TwoCharacters) {
    const auto set = enumerate_parsings("ab");
    EXPECT_EQ(lines(set.parsings), (std::vector<std::string>{"ab", "a|b"}));
    EXPECT_FALSE(set.truncated);
}

TEST(EnumerateParsings, ThreeCharactersInOrder) {
    const auto set = enumerate_parsings("abc");
    EXPECT_EQ(lines(set.parsings), (std::vector<std::string>{"abc", "a|bc", "ab|c", "a|b|c"}));
}

TEST(EnumerateParsings, ContainsMixedSegmentation) {
    const auto all = lines(enumerate_parsings("psword1").parsings);
    EXPECT_NE(std::find(all.begin(), all.end(), "p|s|word1"), all.end());
    EXPECT_EQ(all.size(), 64u);
}

TEST(EnumerateParsings, EmptyPasswordRejected) {
    EXPECT_THROW(enumerate_parsings(""), ValidationError);
    EXPECT_THROW(conformant_parsings(RuleCombination(), ""), ValidationError);
}

TEST(EnumerateParsings, SegmentsAreUnicodeScalars) {
    const auto set = enumerate_parsings("\xC3\xA9\xE2\x82\xAC");
    EXPECT_EQ(lines(set.parsings), (std::vector<std::string>{"\xC3\xA9\xE2\x82\xAC", "\xC3\xA9|\xE2\x82\xAC"}));
}

TEST(EnumerateParsings, CountLawAndOrderForShortInputs) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const std::string pw = std::string("abcdefghij").substr(0, n);
        EnumerationLimits limits;
        limits.max_segments = 16;
        const auto set = enumerate_parsings(pw, limits);
        ASSERT_FALSE(set.truncated);
        ASSERT_EQ(set.parsings.size(), std::size_t{1} << (n - 1)) << "n=" << n;
        const auto order = reference_cut_order(n);
        for (std::size_t i = 0; i < set.parsings.size(); ++i) {
            ASSERT_EQ(utf8::encode(set.parsings[i].joined()), pw);
            ASSERT_EQ(cuts_of(set.parsings[i]), order[i]);
            for (const auto& seg : set.parsings[i].segments) ASSERT_FALSE(seg.empty());
        }
    }
}

TEST(EnumerateParsings, CountLawUpToSixteen) {
    EnumerationLimits limits;
    limits.max_segments = 16;
    limits.max_parsings = std::size_t{1} << 16;
    for (std::size_t n : {12u, 16u}) {
        const auto set = enumerate_parsings(std::string(n, 'x'), limits);
        EXPECT_FALSE(set.truncated);
        EXPECT_EQ(set.parsings.size(), std::size_t{1} << (n - 1));
    }
}

TEST(EnumerateParsings, LimitsSetTruncated) {
    // default limit of 8 segments on a 10-character input
    const auto by_segments = enumerate_parsings("abcdefghij");
    EXPECT_TRUE(by_segments.truncated);
    EXPECT_LT(by_segments.parsings.size(), 512u);
    for (const auto& p : by_segments.parsings) EXPECT_LE(p.segments.size(), 8u);

    EnumerationLimits few;
    few.max_parsings = 3;
    const auto by_count = enumerate_parsings("abcd", few);
    EXPECT_TRUE(by_count.truncated);
    EXPECT_EQ(lines(by_count.parsings), (std::vector<std::string>{"abcd", "a|bcd", "ab|cd"}));

    EnumerationLimits exact;
    exact.max_parsings = 8;
    EXPECT_FALSE(enumerate_parsings("abcd", exact).truncated);
}

TEST(LineFormat, EscapesSeparatorAndBackslash) {
    Parsing p{{U"a|b", U"c\\", U"d"}};
    EXPECT_EQ(to_line(p), "a\\|b|c\\\\|d");
    EXPECT_EQ(parse_line(to_line(p)), p);
    EXPECT_EQ(parse_line("1|Love|Soccer").utf8_segments(), (std::vector<std::string>{"1", "Love", "Soccer"}));
    EXPECT_THROW(parse_line("a||b"), ValidationError);
    EXPECT_THROW(parse_line("ab\\"), ValidationError);
}

TEST(LineFormat, RoundTripsRandomParsings) {
    oracle::Gen gen(5);
    for (int i = 0; i < 500; ++i) {
        Parsing p;
        const std::size_t m = gen.uniform(1, 5);
        for (std::size_t j = 0; j < m; ++j) p.segments.push_back(gen.string_over(U"a|\\é", gen.uniform(1, 4)));
        ASSERT_EQ(parse_line(to_line(p)), p);
    }
}

TEST(ConformantParsings, TagsWorkedExampleSegments) {
    const auto set = conformant_parsings(digits_and_words(), "1LoveSoccer");
    const auto it = std::find_if(set.parsings.begin(), set.parsings.end(),
                                 [](const TaggedParsing& t) { return to_line(t.parsing) == "1|Love|Soccer"; });
    ASSERT_NE(it, set.parsings.end());
    ASSERT_EQ(it->tags.size(), 3u);
    EXPECT_EQ(it->tags[0].to_string(), "rule:digits");
    EXPECT_EQ(it->tags[1].to_string(), "rule:wordlist");
    EXPECT_EQ(it->tags[2].to_string(), "rule:wordlist");

    for (const char* other : {"1|Lov|eSoccer", "1|LoveS|occer"}) {
        const auto o = std::find_if(set.parsings.begin(), set.parsings.end(),
                                    [&](const TaggedParsing& t) { return to_line(t.parsing) == other; });
        ASSERT_NE(o, set.parsings.end()) << other;
        EXPECT_TRUE(o->tags[1].fallback());
        EXPECT_TRUE(o->tags[2].fallback());
    }
}

TEST(ConformantParsings, SingleDigit) {
    const auto set = conformant_parsings(RuleCombination({Rule::char_class("digits", alphabets::digits(), 1, 4)}), "7");
    ASSERT_EQ(set.parsings.size(), 1u);
    EXPECT_EQ(to_line(set.parsings[0].parsing), "7");
    EXPECT_EQ(set.parsings[0].tags[0].to_string(), "rule:digits");
}

TEST(ConformantParsings, UnmatchedInputOnlyHasFallbackSegments) {
    const auto set = conformant_parsings(RuleCombination({Rule::char_class("digits", alphabets::digits(), 1, 4)}), "zz");
    ASSERT_EQ(set.parsings.size(), 2u);
    for (const auto& t : set.parsings) {
        for (const auto& tag : t.tags) EXPECT_TRUE(tag.fallback());
    }
}

TEST(ConformantParsings, SubsetOfExhaustiveAndTagsAgreeWithMembership) {
    oracle::Gen gen(17);
    const std::u32string chars = U"ab1";
    const auto alphabet = std::make_shared<Alphabet>("ab1", chars);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<oracle::ToyRule> toys;
        for (std::size_t i = 0, n = gen.uniform(1, 3); i < n; ++i) toys.push_back(gen.rule("r" + std::to_string(i), chars, 3));
        const auto combo = oracle::build_all(toys, alphabet);
        const std::string pw = utf8::encode(gen.string_over(chars, gen.uniform(1, 8)));
        const auto exhaustive = lines(enumerate_parsings(pw).parsings);
        const std::set<std::string> universe(exhaustive.begin(), exhaustive.end());
        const auto conformant = conformant_parsings(combo, pw);
        for (const auto& t : conformant.parsings) {
            ASSERT_TRUE(universe.count(to_line(t.parsing)));
            ASSERT_EQ(utf8::encode(t.parsing.joined()), pw);
            for (std::size_t s = 0; s < t.tags.size(); ++s) {
                std::vector<std::string> expected;
                for (const auto& toy : toys) {
                    if (toy.member_set().count(t.parsing.segments[s])) expected.push_back(toy.id);
                }
                ASSERT_EQ(t.tags[s].rule_ids, expected);
            }
        }
    }
}

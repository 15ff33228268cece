#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pwfat/error.hpp"
#include "pwfat/rule.hpp"
#include "pwfat/utf8.hpp"

namespace pwfat {

struct EnumerationLimits {
    std::size_t max_segments = 8;
    std::size_t max_parsings = std::size_t{1} << 20;
};

// A contiguous segmentation of a password. Segments are non-empty and
// concatenate back to the password.
struct Parsing {
    std::vector<std::u32string> segments;

    std::u32string joined() const {
        std::u32string out;
        for (const auto& s : segments) out += s;
        return out;
    }

    std::vector<std::string> utf8_segments() const {
        std::vector<std::string> out;
        out.reserve(segments.size());
        for (const auto& s : segments) out.push_back(utf8::encode(s));
        return out;
    }

    friend bool operator==(const Parsing&, const Parsing&) = default;
};

// "seg1|seg2|..." with '|' and '\' escaped by a backslash.
inline std::string to_line(const Parsing& parsing) {
    std::string out;
    for (std::size_t i = 0; i < parsing.segments.size(); ++i) {
        if (i > 0) out.push_back('|');
        for (char c : utf8::encode(parsing.segments[i])) {
            if (c == '|' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
    }
    return out;
}

inline Parsing parse_line(std::string_view line) {
    Parsing parsing;
    std::string current;
    auto flush = [&] {
        if (current.empty()) {
            throw ValidationError("parsing", "empty segment");
        }
        parsing.segments.push_back(utf8::decode(current));
        current.clear();
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '\\') {
            if (i + 1 >= line.size()) {
                throw ValidationError("parsing", "dangling escape");
            }
            current.push_back(line[++i]);
        } else if (c == '|') {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return parsing;
}

struct ParsingSet {
    std::string password;
    std::vector<Parsing> parsings;
    bool truncated = false;
};

namespace detail {

// Visits every composition of `text` into at most `max_segments` pieces in
// segment-count order, then lexicographic order of the cut positions.
// Returns false if the visitor stopped early.
inline bool for_each_composition(std::u32string_view text, std::size_t max_segments,
                                 const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    const std::size_t n = text.size();
    const std::size_t top = std::min(n, max_segments);
    std::vector<std::size_t> bounds;
    for (std::size_t m = 1; m <= top; ++m) {
        // cuts c[0] < ... < c[m-2] drawn from 1..n-1
        std::vector<std::size_t> cuts(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) cuts[i] = i + 1;
        while (true) {
            bounds.clear();
            bounds.push_back(0);
            bounds.insert(bounds.end(), cuts.begin(), cuts.end());
            bounds.push_back(n);
            if (!visit(bounds)) return false;
            // next combination
            std::size_t k = cuts.size();
            while (k > 0 && cuts[k - 1] == n - 1 - (cuts.size() - k)) --k;
            if (k == 0) break;
            ++cuts[k - 1];
            for (std::size_t j = k; j < cuts.size(); ++j) cuts[j] = cuts[j - 1] + 1;
        }
    }
    return true;
}

inline std::u32string require_password(std::string_view password) {
    if (password.empty()) {
        throw ValidationError("password", "must not be empty");
    }
    return utf8::decode(password);
}

} // namespace detail

// All compositions of the password, no rules consulted.
inline ParsingSet enumerate_parsings(std::string_view password, const EnumerationLimits& limits = {}) {
    const std::u32string text = detail::require_password(password);
    ParsingSet out;
    out.password = std::string(password);
    out.truncated = text.size() > limits.max_segments;
    const bool complete = detail::for_each_composition(text, limits.max_segments, [&](const auto& bounds) {
        if (out.parsings.size() >= limits.max_parsings) {
            return false;
        }
        Parsing p;
        for (std::size_t i = 1; i < bounds.size(); ++i) {
            p.segments.emplace_back(text.substr(bounds[i - 1], bounds[i] - bounds[i - 1]));
        }
        out.parsings.push_back(std::move(p));
        return true;
    });
    out.truncated = out.truncated || !complete;
    return out;
}

// Rules that generate one segment; empty means the segment is a fallback
// (priced by brute force downstream).
struct SegmentTag {
    std::vector<std::string> rule_ids;

    bool fallback() const noexcept { return rule_ids.empty(); }

    std::string to_string() const {
        if (fallback()) return "fallback";
        std::string out;
        for (std::size_t i = 0; i < rule_ids.size(); ++i) {
            if (i > 0) out += ",";
            out += "rule:" + rule_ids[i];
        }
        return out;
    }
};

struct TaggedParsing {
    Parsing parsing;
    std::vector<SegmentTag> tags;
};

struct ConformantParsingSet {
    std::string password;
    std::vector<TaggedParsing> parsings;
    bool truncated = false;
};

// Parsings checked against a rule combination. Every composition is kept;
// each segment is tagged with the member rules generating it, or as fallback.
inline ConformantParsingSet conformant_parsings(const RuleCombination& combination, std::string_view password,
                                                const EnumerationLimits& limits = {}) {
    const ParsingSet all = enumerate_parsings(password, limits);
    ConformantParsingSet out;
    out.password = all.password;
    out.truncated = all.truncated;
    out.parsings.reserve(all.parsings.size());
    for (const auto& p : all.parsings) {
        TaggedParsing tagged{p, {}};
        tagged.tags.reserve(p.segments.size());
        for (const auto& seg : p.segments) {
            SegmentTag tag;
            for (const auto& rule : combination.rules()) {
                if (rule->generates(seg)) tag.rule_ids.push_back(rule->id());
            }
            tagged.tags.push_back(std::move(tag));
        }
        out.parsings.push_back(std::move(tagged));
    }
    return out;
}

} // namespace pwfat

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "pwfat/alphabet.hpp"
#include "pwfat/cardinality.hpp"
#include "pwfat/error.hpp"
#include "pwfat/utf8.hpp"

namespace pwfat {

enum class CasePolicy { Sensitive, Insensitive };

inline constexpr std::size_t kNoMaxLength = std::numeric_limits<std::size_t>::max();

// ASCII-only simple case fold; other scalars fold to themselves.
inline char32_t fold_case(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

inline std::u32string fold_case(std::u32string_view text) {
    std::u32string out(text);
    for (auto& c : out) {
        c = fold_case(c);
    }
    return out;
}

// Sorted, duplicate-free set of characters used for aux masks.
class CharMask {
public:
    CharMask() = default;
    explicit CharMask(std::u32string chars) : chars_(std::move(chars)) {
        std::sort(chars_.begin(), chars_.end());
        chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
    }
    static CharMask from_utf8(std::string_view chars) { return CharMask(utf8::decode(chars)); }

    bool contains(char32_t c) const { return std::binary_search(chars_.begin(), chars_.end(), c); }
    const std::u32string& chars() const noexcept { return chars_; }
    bool empty() const noexcept { return chars_.empty(); }

    friend CharMask intersect(const CharMask& a, const CharMask& b) {
        std::u32string out;
        std::set_intersection(a.chars_.begin(), a.chars_.end(), b.chars_.begin(), b.chars_.end(),
                              std::back_inserter(out));
        CharMask m;
        m.chars_ = std::move(out);
        return m;
    }

    friend bool operator==(const CharMask&, const CharMask&) = default;

private:
    std::u32string chars_;
};

// Policy-style side conditions attached to a rule. A default-constructed
// constraint accepts every non-empty string.
struct AuxConstraint {
    std::size_t min_length = 1;
    std::size_t max_length = kNoMaxLength;
    std::optional<CharMask> global_mask;
    // Entry i restricts the character at position i; positions past the end
    // are unrestricted.
    std::vector<std::optional<CharMask>> position_masks;
    CasePolicy case_policy = CasePolicy::Sensitive;

    static AuxConstraint lengths(std::size_t min_len, std::size_t max_len) {
        AuxConstraint aux;
        aux.min_length = min_len;
        aux.max_length = max_len;
        return aux;
    }

    bool satisfiable() const noexcept { return min_length <= max_length; }

    void validate() const {
        if (min_length < 1) {
            throw ValidationError("aux.min_length", "must be at least 1");
        }
        if (min_length > max_length) {
            throw ValidationError("aux", "min_length exceeds max_length");
        }
    }

    bool admits_char(std::size_t position, char32_t c) const {
        if (global_mask && !global_mask->contains(c)) {
            return false;
        }
        if (position < position_masks.size() && position_masks[position] &&
            !position_masks[position]->contains(c)) {
            return false;
        }
        return true;
    }

    bool admits(std::u32string_view text) const {
        if (text.size() < min_length || text.size() > max_length) {
            return false;
        }
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (!admits_char(i, text[i])) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const AuxConstraint&, const AuxConstraint&) = default;
};

// Intersection of two constraints. An empty length range is a legal result
// (satisfiable() == false) and sizes to zero downstream. Case sensitivity is
// the stricter of the two.
inline AuxConstraint conjoin_aux(const AuxConstraint& a, const AuxConstraint& b) {
    AuxConstraint out;
    out.min_length = std::max(a.min_length, b.min_length);
    out.max_length = std::min(a.max_length, b.max_length);
    if (a.global_mask && b.global_mask) {
        out.global_mask = intersect(*a.global_mask, *b.global_mask);
    } else {
        out.global_mask = a.global_mask ? a.global_mask : b.global_mask;
    }
    const std::size_t n = std::max(a.position_masks.size(), b.position_masks.size());
    out.position_masks.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto* ma = i < a.position_masks.size() && a.position_masks[i] ? &*a.position_masks[i] : nullptr;
        const auto* mb = i < b.position_masks.size() && b.position_masks[i] ? &*b.position_masks[i] : nullptr;
        if (ma && mb) {
            out.position_masks[i] = intersect(*ma, *mb);
        } else if (ma) {
            out.position_masks[i] = *ma;
        } else if (mb) {
            out.position_masks[i] = *mb;
        }
    }
    out.case_policy = (a.case_policy == CasePolicy::Sensitive || b.case_policy == CasePolicy::Sensitive)
                          ? CasePolicy::Sensitive
                          : CasePolicy::Insensitive;
    return out;
}

// Word mangling step. Each transform maps one word to exactly one output.
struct Transform {
    enum class Kind { Identity, Lower, Upper, Capitalize, ToggleCase, Leet, Append, Prepend };

    Kind kind = Kind::Identity;
    std::u32string text;  // affix for Append / Prepend

    static Transform identity() { return {Kind::Identity, {}}; }
    static Transform lower() { return {Kind::Lower, {}}; }
    static Transform upper() { return {Kind::Upper, {}}; }
    static Transform capitalize() { return {Kind::Capitalize, {}}; }
    static Transform toggle_case() { return {Kind::ToggleCase, {}}; }
    static Transform leet() { return {Kind::Leet, {}}; }
    static Transform append(std::string_view suffix) { return {Kind::Append, utf8::decode(suffix)}; }
    static Transform prepend(std::string_view prefix) { return {Kind::Prepend, utf8::decode(prefix)}; }

    static char32_t to_upper(char32_t c) { return (c >= U'a' && c <= U'z') ? c - 32 : c; }

    static char32_t to_leet(char32_t c) {
        switch (fold_case(c)) {
        case U'a': return U'4';
        case U'e': return U'3';
        case U'i': return U'1';
        case U'o': return U'0';
        case U's': return U'5';
        case U't': return U'7';
        default: return c;
        }
    }

    std::u32string apply(std::u32string_view word) const {
        std::u32string out(word);
        switch (kind) {
        case Kind::Identity:
            break;
        case Kind::Lower:
            for (auto& c : out) c = fold_case(c);
            break;
        case Kind::Upper:
            for (auto& c : out) c = to_upper(c);
            break;
        case Kind::Capitalize:
            for (auto& c : out) c = fold_case(c);
            if (!out.empty()) out[0] = to_upper(out[0]);
            break;
        case Kind::ToggleCase:
            for (auto& c : out) c = (fold_case(c) == c) ? to_upper(c) : fold_case(c);
            break;
        case Kind::Leet:
            for (auto& c : out) c = to_leet(c);
            break;
        case Kind::Append:
            out += text;
            break;
        case Kind::Prepend:
            out = text + out;
            break;
        }
        return out;
    }

    std::string name() const {
        switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::Lower: return "lower";
        case Kind::Upper: return "upper";
        case Kind::Capitalize: return "capitalize";
        case Kind::ToggleCase: return "toggle_case";
        case Kind::Leet: return "leet";
        case Kind::Append: return "append";
        case Kind::Prepend: return "prepend";
        }
        return "identity";
    }

    static Transform from_name(std::string_view name, std::string_view affix = {}) {
        if (name == "identity") return identity();
        if (name == "lower") return lower();
        if (name == "upper") return upper();
        if (name == "capitalize") return capitalize();
        if (name == "toggle_case") return toggle_case();
        if (name == "leet") return leet();
        if (name == "append") return append(affix);
        if (name == "prepend") return prepend(affix);
        throw ValidationError("transform", "unknown transform '" + std::string(name) + "'");
    }

    friend bool operator==(const Transform&, const Transform&) = default;
};

enum class GeneratorKind { Wordlist, CharClassLengthRange, MangledWordlist, ExternalEnumerable };

inline std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::Wordlist: return "wordlist";
    case GeneratorKind::CharClassLengthRange: return "char_class";
    case GeneratorKind::MangledWordlist: return "mangled_wordlist";
    case GeneratorKind::ExternalEnumerable: return "external";
    }
    return "wordlist";
}

// Receives each candidate in enumeration order; return false to stop.
using CandidateVisitor = std::function<bool(std::u32string_view)>;
using MembershipPredicate = std::function<bool(std::u32string_view)>;
using Enumerator = std::function<bool(const CandidateVisitor&)>;

class Rule;
using RuleRef = std::shared_ptr<const Rule>;

// A generator of a finite (or declared-unbounded) set of strings over an
// alphabet, restricted by an aux constraint. Immutable once built.
class Rule {
public:
    static RuleRef wordlist(std::string id, AlphabetRef alphabet, const std::vector<std::u32string>& entries,
                            AuxConstraint aux = {}) {
        aux.validate();
        return build(std::move(id), std::move(alphabet), std::move(aux), WordlistData{dedupe(entries, aux)});
    }

    static RuleRef wordlist(std::string id, AlphabetRef alphabet, const std::vector<std::string>& entries,
                            AuxConstraint aux = {}) {
        return wordlist(std::move(id), std::move(alphabet), decode_all(entries), std::move(aux));
    }

    // Every string over the alphabet whose length lies in the aux range.
    static RuleRef char_class(std::string id, AlphabetRef alphabet, AuxConstraint aux) {
        aux.validate();
        if (aux.max_length == kNoMaxLength) {
            throw ValidationError("aux.max_length", "class rules need a finite maximum length");
        }
        return build(std::move(id), std::move(alphabet), std::move(aux), ClassData{});
    }

    static RuleRef char_class(std::string id, AlphabetRef alphabet, std::size_t min_len, std::size_t max_len) {
        return char_class(std::move(id), std::move(alphabet), AuxConstraint::lengths(min_len, max_len));
    }

    static RuleRef mangled(std::string id, AlphabetRef alphabet, const std::vector<std::u32string>& words,
                           std::vector<Transform> transforms, AuxConstraint aux = {}) {
        aux.validate();
        if (transforms.empty()) {
            throw ValidationError("transforms", "mangled wordlist needs at least one transform");
        }
        MangledData data;
        data.words = dedupe(words, AuxConstraint{});
        data.transforms = std::move(transforms);
        return build(std::move(id), std::move(alphabet), std::move(aux), std::move(data));
    }

    static RuleRef mangled(std::string id, AlphabetRef alphabet, const std::vector<std::string>& words,
                           std::vector<Transform> transforms, AuxConstraint aux = {}) {
        return mangled(std::move(id), std::move(alphabet), decode_all(words), std::move(transforms), std::move(aux));
    }

    // Externally supplied model (e.g. a trained grammar) with declared size and
    // membership. The enumerator is optional; without it the rule cannot be
    // replayed by the cracking simulator.
    static RuleRef external(std::string id, AlphabetRef alphabet, Cardinality declared, MembershipPredicate member,
                            Enumerator enumerate = {}, AuxConstraint aux = {}) {
        aux.validate();
        if (!member) {
            throw ValidationError("external", "membership predicate is required");
        }
        return build(std::move(id), std::move(alphabet), std::move(aux),
                     ExternalData{std::move(declared), std::move(member), std::move(enumerate)});
    }

    // Same generator under conjoin_aux(aux(), extra). Unsatisfiable results are
    // allowed and size to zero.
    RuleRef restricted(const AuxConstraint& extra, std::string new_id = {}) const {
        AuxConstraint aux = conjoin_aux(aux_, extra);
        return build(new_id.empty() ? id_ : std::move(new_id), alphabet_, std::move(aux), data_);
    }

    const std::string& id() const noexcept { return id_; }
    const Alphabet& alphabet() const noexcept { return *alphabet_; }
    const AlphabetRef& alphabet_ref() const noexcept { return alphabet_; }
    const AuxConstraint& aux() const noexcept { return aux_; }

    GeneratorKind kind() const noexcept {
        return std::visit(
            [](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, WordlistData>) return GeneratorKind::Wordlist;
                else if constexpr (std::is_same_v<T, ClassData>) return GeneratorKind::CharClassLengthRange;
                else if constexpr (std::is_same_v<T, MangledData>) return GeneratorKind::MangledWordlist;
                else return GeneratorKind::ExternalEnumerable;
            },
            data_);
    }

    const Cardinality& cardinality() const noexcept { return cardinality_; }

    // False when cardinality() is only an upper bound (mangled wordlists may
    // produce the same string from two words or transforms).
    bool cardinality_exact() const noexcept { return kind() != GeneratorKind::MangledWordlist; }

    bool enumerable() const {
        if (const auto* ext = std::get_if<ExternalData>(&data_)) {
            return static_cast<bool>(ext->enumerate);
        }
        return true;
    }

    // Entries of a wordlist rule (folded when case-insensitive), or the base
    // words of a mangled rule.
    const std::vector<std::u32string>& words() const {
        if (const auto* w = std::get_if<WordlistData>(&data_)) return w->entries;
        if (const auto* m = std::get_if<MangledData>(&data_)) return m->words;
        static const std::vector<std::u32string> none;
        return none;
    }

    const std::vector<Transform>& transforms() const {
        if (const auto* m = std::get_if<MangledData>(&data_)) return m->transforms;
        static const std::vector<Transform> none;
        return none;
    }

    bool generates(std::u32string_view candidate) const {
        if (!aux_.satisfiable() || !aux_.admits(candidate) || !alphabet_->contains_all(candidate)) {
            return false;
        }
        return std::visit(
            [&](const auto& d) -> bool {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, WordlistData>) {
                    if (aux_.case_policy == CasePolicy::Insensitive) {
                        return index_.count(fold_case(candidate)) != 0;
                    }
                    return index_.count(std::u32string(candidate)) != 0;
                } else if constexpr (std::is_same_v<T, ClassData>) {
                    return true;
                } else if constexpr (std::is_same_v<T, MangledData>) {
                    return index_.count(std::u32string(candidate)) != 0;
                } else {
                    return d.member(candidate);
                }
            },
            data_);
    }

    bool generates_utf8(std::string_view candidate) const { return generates(utf8::decode(candidate)); }

    // Replays the rule's output in its fixed order: file order for wordlists
    // (case variants in alphabet order when insensitive), word-major then
    // transform order for mangled lists (duplicates are replayed), and
    // length-ascending lexicographic order for class rules. Returns false if
    // the visitor stopped early.
    bool enumerate(const CandidateVisitor& visit) const {
        if (!aux_.satisfiable()) {
            return true;
        }
        return std::visit(
            [&](const auto& d) -> bool {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, WordlistData>) {
                    for (const auto& entry : d.entries) {
                        if (aux_.case_policy == CasePolicy::Insensitive) {
                            if (!enumerate_case_variants(entry, visit)) return false;
                        } else if (admissible(entry) && !visit(entry)) {
                            return false;
                        }
                    }
                    return true;
                } else if constexpr (std::is_same_v<T, ClassData>) {
                    return enumerate_class(visit);
                } else if constexpr (std::is_same_v<T, MangledData>) {
                    for (const auto& word : d.words) {
                        for (const auto& t : d.transforms) {
                            const auto out = t.apply(word);
                            if (admissible(out) && !visit(out)) return false;
                        }
                    }
                    return true;
                } else {
                    if (!d.enumerate) {
                        throw ValidationError("rule." + id_, "external rule has no enumerator");
                    }
                    return d.enumerate([&](std::u32string_view s) {
                        return !generates(s) || visit(s);
                    });
                }
            },
            data_);
    }

private:
    struct WordlistData {
        std::vector<std::u32string> entries;
    };
    struct ClassData {};
    struct MangledData {
        std::vector<std::u32string> words;
        std::vector<Transform> transforms;
    };
    struct ExternalData {
        Cardinality declared;
        MembershipPredicate member;
        Enumerator enumerate;
    };
    using Data = std::variant<WordlistData, ClassData, MangledData, ExternalData>;

    struct Token {};

public:
    Rule(Token, std::string id, AlphabetRef alphabet, AuxConstraint aux, Data data)
        : id_(std::move(id)), alphabet_(std::move(alphabet)), aux_(std::move(aux)), data_(std::move(data)) {
        if (id_.empty()) {
            throw ValidationError("rule.id", "must not be empty");
        }
        if (!alphabet_) {
            throw ValidationError("rule." + id_, "alphabet is required");
        }
        build_index();
        cardinality_ = compute_cardinality();
    }

private:
    static RuleRef build(std::string id, AlphabetRef alphabet, AuxConstraint aux, Data data) {
        return std::make_shared<const Rule>(Token{}, std::move(id), std::move(alphabet), std::move(aux),
                                            std::move(data));
    }

    static std::vector<std::u32string> decode_all(const std::vector<std::string>& entries) {
        std::vector<std::u32string> out;
        out.reserve(entries.size());
        for (const auto& e : entries) {
            out.push_back(utf8::decode(e));
        }
        return out;
    }

    // Order-preserving dedupe; under an insensitive policy entries collapse to
    // their folded form.
    static std::vector<std::u32string> dedupe(const std::vector<std::u32string>& entries, const AuxConstraint& aux) {
        std::vector<std::u32string> out;
        std::unordered_set<std::u32string> seen;
        for (const auto& raw : entries) {
            if (raw.empty()) {
                continue;
            }
            auto entry = aux.case_policy == CasePolicy::Insensitive ? fold_case(raw) : raw;
            if (seen.insert(entry).second) {
                out.push_back(std::move(entry));
            }
        }
        return out;
    }

    bool admissible(std::u32string_view s) const { return aux_.admits(s) && alphabet_->contains_all(s); }

    // Characters allowed at `position`, in alphabet order.
    std::u32string allowed_at(std::size_t position) const {
        std::u32string out;
        for (char32_t c : alphabet_->characters()) {
            if (aux_.admits_char(position, c)) {
                out.push_back(c);
            }
        }
        return out;
    }

    // Alphabet characters at `position` that fold to the same value as c.
    std::u32string variants_at(std::size_t position, char32_t folded) const {
        std::u32string out;
        for (char32_t c : alphabet_->characters()) {
            if (fold_case(c) == folded && aux_.admits_char(position, c)) {
                out.push_back(c);
            }
        }
        return out;
    }

    void build_index() {
        if (const auto* w = std::get_if<WordlistData>(&data_)) {
            index_.insert(w->entries.begin(), w->entries.end());
        } else if (const auto* m = std::get_if<MangledData>(&data_)) {
            for (const auto& word : m->words) {
                for (const auto& t : m->transforms) {
                    auto out = t.apply(word);
                    if (admissible(out)) {
                        index_.insert(std::move(out));
                    }
                }
            }
        }
    }

    Cardinality compute_cardinality() const {
        if (!aux_.satisfiable()) {
            return Cardinality(0);
        }
        return std::visit(
            [&](const auto& d) -> Cardinality {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, WordlistData>) {
                    BigInt total = 0;
                    for (const auto& entry : d.entries) {
                        if (aux_.case_policy == CasePolicy::Insensitive) {
                            if (entry.size() < aux_.min_length || entry.size() > aux_.max_length) continue;
                            BigInt variants = 1;
                            for (std::size_t i = 0; i < entry.size() && variants != 0; ++i) {
                                variants *= variants_at(i, entry[i]).size();
                            }
                            total += variants;
                        } else if (admissible(entry)) {
                            total += 1;
                        }
                    }
                    return Cardinality(total);
                } else if constexpr (std::is_same_v<T, ClassData>) {
                    // sum over lengths of the product of per-position choices
                    BigInt total = 0;
                    BigInt prefix = 1;
                    for (std::size_t len = 1; len <= aux_.max_length && prefix != 0; ++len) {
                        prefix *= allowed_at(len - 1).size();
                        if (len >= aux_.min_length) {
                            total += prefix;
                        }
                    }
                    return Cardinality(total);
                } else if constexpr (std::is_same_v<T, MangledData>) {
                    return Cardinality(BigInt(d.words.size()) * d.transforms.size());
                } else {
                    return d.declared;
                }
            },
            data_);
    }

    // Odometer over per-position choice lists; rightmost position varies fastest.
    static bool odometer(const std::vector<std::u32string>& choices, const CandidateVisitor& visit) {
        for (const auto& c : choices) {
            if (c.empty()) return true;
        }
        std::vector<std::size_t> digit(choices.size(), 0);
        std::u32string current(choices.size(), U'\0');
        for (std::size_t i = 0; i < choices.size(); ++i) current[i] = choices[i][0];
        while (true) {
            if (!visit(current)) return false;
            std::size_t pos = choices.size();
            while (pos > 0) {
                --pos;
                if (++digit[pos] < choices[pos].size()) {
                    current[pos] = choices[pos][digit[pos]];
                    break;
                }
                digit[pos] = 0;
                current[pos] = choices[pos][0];
                if (pos == 0) return true;
            }
        }
    }

    bool enumerate_class(const CandidateVisitor& visit) const {
        std::vector<std::u32string> choices;
        for (std::size_t len = 1; len <= aux_.max_length; ++len) {
            choices.push_back(allowed_at(len - 1));
            if (choices.back().empty()) {
                return true;
            }
            if (len >= aux_.min_length && !odometer(choices, visit)) {
                return false;
            }
        }
        return true;
    }

    bool enumerate_case_variants(const std::u32string& folded, const CandidateVisitor& visit) const {
        if (folded.size() < aux_.min_length || folded.size() > aux_.max_length) {
            return true;
        }
        std::vector<std::u32string> choices;
        choices.reserve(folded.size());
        for (std::size_t i = 0; i < folded.size(); ++i) {
            choices.push_back(variants_at(i, folded[i]));
        }
        return odometer(choices, visit);
    }

    std::string id_;
    AlphabetRef alphabet_;
    AuxConstraint aux_;
    Data data_;
    std::unordered_set<std::u32string> index_;
    Cardinality cardinality_;
};

// Union of rule outputs.
class RuleCombination {
public:
    RuleCombination() = default;
    explicit RuleCombination(std::vector<RuleRef> rules) : rules_(std::move(rules)) {
        for (const auto& r : rules_) {
            if (!r) throw ValidationError("combination", "null rule");
        }
    }

    const std::vector<RuleRef>& rules() const noexcept { return rules_; }
    std::size_t size() const noexcept { return rules_.size(); }
    bool empty() const noexcept { return rules_.empty(); }

    bool generates(std::u32string_view candidate) const {
        return std::any_of(rules_.begin(), rules_.end(), [&](const RuleRef& r) { return r->generates(candidate); });
    }

    RuleCombination with(RuleRef extra) const {
        auto rules = rules_;
        rules.push_back(std::move(extra));
        return RuleCombination(std::move(rules));
    }

    const RuleRef* find(std::string_view id) const {
        for (const auto& r : rules_) {
            if (r->id() == id) return &r;
        }
        return nullptr;
    }

private:
    std::vector<RuleRef> rules_;
};

// Total order over distinct rules: the attacker's try-order.
class Topology {
public:
    Topology() = default;
    explicit Topology(std::vector<RuleRef> ordered) : ordered_(std::move(ordered)) {
        std::unordered_set<std::string> ids;
        for (const auto& r : ordered_) {
            if (!r) throw ValidationError("topology", "null rule");
            if (!ids.insert(r->id()).second) {
                throw ValidationError("topology", "rule '" + r->id() + "' appears more than once");
            }
        }
    }

    const std::vector<RuleRef>& rules() const noexcept { return ordered_; }
    std::size_t size() const noexcept { return ordered_.size(); }
    bool empty() const noexcept { return ordered_.empty(); }

    // Edges of the induced directed path graph.
    std::vector<std::pair<std::string, std::string>> edges() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 1; i < ordered_.size(); ++i) {
            out.emplace_back(ordered_[i - 1]->id(), ordered_[i]->id());
        }
        return out;
    }

private:
    std::vector<RuleRef> ordered_;
};

struct UnionCardinality {
    Cardinality value;
    bool exact = false;
};

// Exact deduplicated size when every member is a wordlist, otherwise the
// subadditive bound sum(|rule|).
inline UnionCardinality union_cardinality(const RuleCombination& combination) {
    if (combination.empty()) {
        throw ValidationError("combination", "must not be empty");
    }
    const bool all_wordlists = std::all_of(combination.rules().begin(), combination.rules().end(),
                                           [](const RuleRef& r) { return r->kind() == GeneratorKind::Wordlist; });
    if (all_wordlists) {
        std::unordered_set<std::u32string> seen;
        for (const auto& r : combination.rules()) {
            r->enumerate([&](std::u32string_view s) {
                seen.emplace(s);
                return true;
            });
        }
        return {Cardinality(seen.size()), true};
    }
    Cardinality total(0);
    for (const auto& r : combination.rules()) {
        total += r->cardinality();
    }
    const bool exact = combination.size() == 1 && combination.rules().front()->cardinality_exact();
    return {total, exact};
}

} // namespace pwfat

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pwfat/alphabet.hpp"
#include "pwfat/cardinality.hpp"
#include "pwfat/error.hpp"
#include "pwfat/parser.hpp"
#include "pwfat/rule.hpp"
#include "pwfat/strength.hpp"

namespace pwfat {

using json = nlohmann::json;

inline constexpr int kConfigVersion = 1;

// Several validation problems reported together.
class ConfigError : public ValidationError {
public:
    struct Issue {
        std::string field;
        std::string message;
    };

    explicit ConfigError(std::vector<Issue> issues)
        : ValidationError(issues.empty() ? "config" : issues.front().field, summarize(issues)),
          issues_(std::move(issues)) {}

    const std::vector<Issue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::vector<Issue>& issues) {
        std::string out = std::to_string(issues.size()) + " problem(s)";
        for (const auto& i : issues) out += "; " + i.field + ": " + i.message;
        return out;
    }

    std::vector<Issue> issues_;
};

namespace json_io {

// Rationals are accepted as JSON integers, decimal floats (read through their
// shortest round-trip text) or strings like "1/3" and "2.5e-3".
inline Rational read_rational(const json& j, const std::string& field) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
        if (j.is_number_unsigned()) return Rational(BigInt(j.get<unsigned long long>()));
        if (j.is_number_float()) {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
            return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
        }
    } catch (const ValidationError&) {
    }
    throw ValidationError(field, "expected a number or numeric string");
}

inline std::string write_rational(const Rational& r) { return to_string(r); }

template <typename T>
T read(const json& obj, const char* key, const std::string& field, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(field + "." + key, "has the wrong type");
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& field) {
    if (!obj.contains(key) || obj.at(key).is_null()) throw ValidationError(field + "." + key, "is required");
    return read<T>(obj, key, field, T{});
}

} // namespace json_io

struct AlphabetSpec {
    std::string name = "alnum";
    std::optional<std::string> characters;  // set: explicit; unset: `name` is a preset

    AlphabetRef build() const {
        if (characters) return alphabets::make(name, *characters);
        if (auto a = alphabets::preset(name)) return a;
        throw ValidationError("alphabet", "unknown preset '" + name + "'");
    }
};

inline AlphabetSpec read_alphabet(const json& j, const std::string& field) {
    AlphabetSpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
    } else if (j.is_object()) {
        spec.name = json_io::read<std::string>(j, "name", field, "custom");
        if (j.contains("characters")) spec.characters = json_io::require<std::string>(j, "characters", field);
    } else {
        throw ValidationError(field, "expected a preset name or {name, characters}");
    }
    spec.build();
    return spec;
}

inline json write_alphabet(const AlphabetSpec& spec) {
    if (!spec.characters) return spec.name;
    return json{{"name", spec.name}, {"characters", *spec.characters}};
}

// A rule as written in the config file; wordlist contents stay on disk.
struct RuleDefinition {
    std::string id;
    GeneratorKind kind = GeneratorKind::Wordlist;
    std::optional<std::string> path;
    std::vector<std::string> entries;  // inline alternative to `path`
    std::optional<AlphabetSpec> alphabet;
    std::optional<std::size_t> min_length;
    std::optional<std::size_t> max_length;
    std::optional<std::string> mask;
    std::vector<std::optional<std::string>> position_masks;
    CasePolicy case_policy = CasePolicy::Sensitive;
    std::vector<Transform> transforms;

    AuxConstraint aux() const {
        AuxConstraint aux;
        if (min_length) aux.min_length = *min_length;
        if (max_length) aux.max_length = *max_length;
        if (mask) aux.global_mask = CharMask::from_utf8(*mask);
        for (const auto& m : position_masks) {
            aux.position_masks.push_back(m ? std::optional<CharMask>(CharMask::from_utf8(*m)) : std::nullopt);
        }
        aux.case_policy = case_policy;
        return aux;
    }
};

inline GeneratorKind read_kind(const std::string& kind, const std::string& field) {
    if (kind == "wordlist") return GeneratorKind::Wordlist;
    if (kind == "char_class") return GeneratorKind::CharClassLengthRange;
    if (kind == "mangled_wordlist") return GeneratorKind::MangledWordlist;
    if (kind == "external") {
        throw ValidationError(field, "external rules are registered in code, not in config files");
    }
    throw ValidationError(field, "unknown rule kind '" + kind + "'");
}

inline RuleDefinition read_rule(const json& j, const std::string& field) {
    if (!j.is_object()) throw ValidationError(field, "expected an object");
    RuleDefinition def;
    def.id = json_io::require<std::string>(j, "id", field);
    def.kind = read_kind(json_io::require<std::string>(j, "kind", field), field + ".kind");
    if (j.contains("path")) def.path = json_io::require<std::string>(j, "path", field);
    def.entries = json_io::read<std::vector<std::string>>(j, "entries", field, {});
    if (j.contains("alphabet")) def.alphabet = read_alphabet(j.at("alphabet"), field + ".alphabet");
    if (j.contains("characters")) {
        def.alphabet = AlphabetSpec{def.id, json_io::require<std::string>(j, "characters", field)};
    }
    if (j.contains("min_length")) def.min_length = json_io::require<std::size_t>(j, "min_length", field);
    if (j.contains("max_length")) def.max_length = json_io::require<std::size_t>(j, "max_length", field);
    if (j.contains("mask")) def.mask = json_io::require<std::string>(j, "mask", field);
    if (j.contains("position_masks")) {
        for (const auto& m : j.at("position_masks")) {
            if (m.is_null()) def.position_masks.emplace_back();
            else if (m.is_string()) def.position_masks.emplace_back(m.get<std::string>());
            else throw ValidationError(field + ".position_masks", "entries must be strings or null");
        }
    }
    const auto policy = json_io::read<std::string>(j, "case_policy", field, "sensitive");
    if (policy == "sensitive") def.case_policy = CasePolicy::Sensitive;
    else if (policy == "insensitive") def.case_policy = CasePolicy::Insensitive;
    else throw ValidationError(field + ".case_policy", "expected 'sensitive' or 'insensitive'");
    if (j.contains("transforms")) {
        for (const auto& t : j.at("transforms")) {
            if (t.is_string()) {
                def.transforms.push_back(Transform::from_name(t.get<std::string>()));
            } else {
                def.transforms.push_back(Transform::from_name(json_io::require<std::string>(t, "kind", field),
                                                              json_io::read<std::string>(t, "text", field, "")));
            }
        }
    }
    switch (def.kind) {
    case GeneratorKind::CharClassLengthRange:
        if (!def.alphabet) throw ValidationError(field, "char_class rules need 'characters' or 'alphabet'");
        if (!def.max_length) throw ValidationError(field + ".max_length", "is required for char_class rules");
        break;
    case GeneratorKind::Wordlist:
    case GeneratorKind::MangledWordlist:
        if (!def.path && !j.contains("entries")) throw ValidationError(field, "needs 'path' or 'entries'");
        if (def.kind == GeneratorKind::MangledWordlist && def.transforms.empty()) {
            throw ValidationError(field + ".transforms", "mangled_wordlist needs at least one transform");
        }
        break;
    default:
        break;
    }
    def.aux().validate();
    return def;
}

inline json write_rule(const RuleDefinition& def) {
    json j{{"id", def.id}, {"kind", std::string(to_string(def.kind))}};
    if (def.path) j["path"] = *def.path;
    if (!def.entries.empty()) j["entries"] = def.entries;
    if (def.alphabet) j["alphabet"] = write_alphabet(*def.alphabet);
    if (def.min_length) j["min_length"] = *def.min_length;
    if (def.max_length) j["max_length"] = *def.max_length;
    if (def.mask) j["mask"] = *def.mask;
    if (!def.position_masks.empty()) {
        json masks = json::array();
        for (const auto& m : def.position_masks) masks.push_back(m ? json(*m) : json(nullptr));
        j["position_masks"] = masks;
    }
    j["case_policy"] = def.case_policy == CasePolicy::Sensitive ? "sensitive" : "insensitive";
    if (!def.transforms.empty()) {
        json ts = json::array();
        for (const auto& t : def.transforms) {
            json tj{{"kind", t.name()}};
            if (!t.text.empty()) tj["text"] = utf8::encode(t.text);
            ts.push_back(tj);
        }
        j["transforms"] = ts;
    }
    return j;
}

inline ProtectionFunction read_protection(const json& j, const std::string& field) {
    ProtectionFunction f;
    f.id = json_io::require<std::string>(j, "id", field);
    if (!j.contains("cost_model_seconds_per_guess")) {
        throw ValidationError(field + ".cost_model_seconds_per_guess", "is required");
    }
    f.cost_seconds_per_guess =
        json_io::read_rational(j.at("cost_model_seconds_per_guess"), field + ".cost_model_seconds_per_guess");
    f.description = json_io::read<std::string>(j, "description", field, "");
    f.validate();
    return f;
}

inline json write_protection(const ProtectionFunction& f) {
    return json{{"id", f.id},
                {"cost_model_seconds_per_guess", json_io::write_rational(f.cost_seconds_per_guess)},
                {"description", f.description}};
}

template <typename V, typename Read>
std::map<int, V> read_year_table(const json& table, const std::string& field, Read read_value) {
    if (!table.is_object() || table.empty()) throw ValidationError(field, "expected a non-empty {year: value} object");
    std::map<int, V> out;
    for (const auto& [year, value] : table.items()) {
        int y = 0;
        const auto res = std::from_chars(year.data(), year.data() + year.size(), y);
        if (res.ec != std::errc{} || res.ptr != year.data() + year.size()) {
            throw ValidationError(field, "year keys must be integers");
        }
        out.emplace(y, read_value(value));
    }
    return out;
}

inline AdversaryModel read_adversary(const json& j, const std::string& field) {
    AdversaryModel a;
    a.id = json_io::require<std::string>(j, "id", field);
    a.baseline_year = json_io::read<int>(j, "baseline_year", field, 2015);
    if (j.contains("baseline_guess_rate")) {
        a.baseline_guess_rate = json_io::read_rational(j.at("baseline_guess_rate"), field + ".baseline_guess_rate");
    } else {
        throw ValidationError(field + ".baseline_guess_rate", "is required");
    }
    if (j.contains("scaling")) {
        const auto& s = j.at("scaling");
        if (s.contains("doubling_period_years")) {
            a.scaling = DoublingScaling{
                json_io::read_rational(s.at("doubling_period_years"), field + ".scaling.doubling_period_years")};
            if (std::get<DoublingScaling>(a.scaling).period_years <= 0) {
                throw ValidationError(field + ".scaling.doubling_period_years", "must be positive");
            }
        } else if (s.contains("table")) {
            a.scaling = TableScaling{read_year_table<Rational>(s.at("table"), field + ".scaling.table", [&](const json& v) {
                const Rational r = json_io::read_rational(v, field + ".scaling.table");
                if (r <= 0) throw ValidationError(field + ".scaling.table", "factors must be positive");
                return r;
            })};
        } else {
            throw ValidationError(field + ".scaling", "expected doubling_period_years or table");
        }
    }
    if (j.contains("parallelism")) {
        const auto& p = j.at("parallelism");
        const auto read_count = [&](const json& v) {
            const Rational r = json_io::read_rational(v, field + ".parallelism");
            if (boost::multiprecision::denominator(r) != 1 || r < 1) {
                throw ValidationError(field + ".parallelism", "must be a positive integer");
            }
            return BigInt(boost::multiprecision::numerator(r));
        };
        if (p.is_object() && p.contains("table")) {
            a.parallelism = TableParallelism{read_year_table<BigInt>(p.at("table"), field + ".parallelism.table", read_count)};
        } else {
            a.parallelism = ConstantParallelism{read_count(p)};
        }
    }
    const auto placement = json_io::read<std::string>(j, "placement", field, "divide");
    if (placement == "divide") a.placement = ScalingPlacement::Divide;
    else if (placement == "literal") a.placement = ScalingPlacement::Literal;
    else throw ValidationError(field + ".placement", "expected 'divide' or 'literal'");
    a.validate();
    return a;
}

inline json write_adversary(const AdversaryModel& a) {
    json j{{"id", a.id},
           {"baseline_year", a.baseline_year},
           {"baseline_guess_rate", json_io::write_rational(a.baseline_guess_rate)}};
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DoublingScaling>) {
                j["scaling"] = {{"doubling_period_years", json_io::write_rational(s.period_years)}};
            } else if constexpr (std::is_same_v<T, TableScaling>) {
                json table = json::object();
                for (const auto& [y, v] : s.factors) table[std::to_string(y)] = json_io::write_rational(v);
                j["scaling"] = {{"table", table}};
            } else {
                throw ValidationError("adversary." + a.id, "custom scaling functions cannot be serialized");
            }
        },
        a.scaling);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantParallelism>) {
                j["parallelism"] = p.processors.str();
            } else if constexpr (std::is_same_v<T, TableParallelism>) {
                json table = json::object();
                for (const auto& [y, v] : p.processors) table[std::to_string(y)] = v.str();
                j["parallelism"] = {{"table", table}};
            } else {
                throw ValidationError("adversary." + a.id, "custom parallelism functions cannot be serialized");
            }
        },
        a.parallelism);
    j["placement"] = a.placement == ScalingPlacement::Divide ? "divide" : "literal";
    return j;
}

// Everything needed to build an Engine. Relative wordlist paths resolve
// against base_dir (the config file's directory).
struct EngineConfig {
    std::filesystem::path base_dir = ".";
    AlphabetSpec alphabet;
    std::size_t min_length = 1;
    std::size_t max_length = 16;
    std::vector<RuleDefinition> rules;
    std::vector<std::string> topology;
    std::vector<ProtectionFunction> protection_functions = protection_presets::catalog();
    std::vector<AdversaryModel> adversaries = adversary_presets::catalog();
    std::string protection = "fast-hash";
    std::string adversary = "commodity";
    Rational threshold_seconds = 90 * 24 * 3600;
    int evaluation_year = 2015;
    EnumerationLimits limits;
    std::size_t oracle_trials = 1;
    std::uint64_t oracle_seed = 0;
};

namespace detail {

template <typename T, typename F>
void merge_by_id(std::vector<T>& into, const T& item, F&& id_of) {
    for (auto& existing : into) {
        if (id_of(existing) == id_of(item)) {
            existing = item;
            return;
        }
    }
    into.push_back(item);
}

} // namespace detail

// Parses the config schema. Problems in independent sections are collected
// and reported together as a ConfigError.
inline EngineConfig parse_config(const json& j, std::filesystem::path base_dir = ".") {
    if (!j.is_object()) throw ValidationError("config", "expected a JSON object");
    EngineConfig cfg;
    cfg.base_dir = std::move(base_dir);
    std::vector<ConfigError::Issue> issues;
    const auto attempt = [&](auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        } catch (const ValidationError& e) {
            issues.push_back({e.field(), e.what()});
        } catch (const json::exception& e) {
            issues.push_back({"config", e.what()});
        }
    };

    attempt([&] {
        const int version = json_io::read<int>(j, "version", "config", kConfigVersion);
        if (version != kConfigVersion) throw ValidationError("config.version", "unsupported version");
    });
    attempt([&] {
        if (j.contains("alphabet")) cfg.alphabet = read_alphabet(j.at("alphabet"), "alphabet");
    });
    attempt([&] {
        if (!j.contains("policy")) return;
        const auto& p = j.at("policy");
        cfg.min_length = json_io::read<std::size_t>(p, "min_length", "policy", cfg.min_length);
        cfg.max_length = json_io::read<std::size_t>(p, "max_length", "policy", cfg.max_length);
        if (cfg.min_length < 1) throw ValidationError("policy.min_length", "must be at least 1");
        if (cfg.min_length > cfg.max_length) throw ValidationError("policy", "min_length exceeds max_length");
    });
    if (j.contains("rules")) {
        if (!j.at("rules").is_array()) {
            issues.push_back({"rules", "expected an array"});
        } else {
            std::size_t i = 0;
            for (const auto& r : j.at("rules")) {
                attempt([&] {
                    auto def = read_rule(r, "rules[" + std::to_string(i) + "]");
                    for (const auto& other : cfg.rules) {
                        if (other.id == def.id) throw ValidationError("rules." + def.id, "duplicate rule id");
                    }
                    cfg.rules.push_back(std::move(def));
                });
                ++i;
            }
        }
    }
    attempt([&] {
        cfg.topology = json_io::read<std::vector<std::string>>(j, "topology", "config", {});
        for (const auto& id : cfg.topology) {
            const bool known = std::any_of(cfg.rules.begin(), cfg.rules.end(), [&](const auto& r) { return r.id == id; });
            if (!known) throw ValidationError("topology", "unknown rule '" + id + "'");
        }
    });
    attempt([&] {
        if (!j.contains("protection_functions")) return;
        for (const auto& f : j.at("protection_functions")) {
            detail::merge_by_id(cfg.protection_functions, read_protection(f, "protection_functions"),
                                [](const auto& x) { return x.id; });
        }
    });
    attempt([&] {
        if (!j.contains("adversaries")) return;
        for (const auto& a : j.at("adversaries")) {
            detail::merge_by_id(cfg.adversaries, read_adversary(a, "adversaries"), [](const auto& x) { return x.id; });
        }
    });
    attempt([&] {
        cfg.protection = json_io::read<std::string>(j, "protection", "config", cfg.protection);
        if (std::none_of(cfg.protection_functions.begin(), cfg.protection_functions.end(),
                         [&](const auto& f) { return f.id == cfg.protection; })) {
            throw ValidationError("protection", "unknown protection function '" + cfg.protection + "'");
        }
    });
    attempt([&] {
        cfg.adversary = json_io::read<std::string>(j, "adversary", "config", cfg.adversary);
        if (std::none_of(cfg.adversaries.begin(), cfg.adversaries.end(),
                         [&](const auto& a) { return a.id == cfg.adversary; })) {
            throw ValidationError("adversary", "unknown adversary '" + cfg.adversary + "'");
        }
    });
    attempt([&] {
        if (j.contains("threshold_seconds")) {
            cfg.threshold_seconds = json_io::read_rational(j.at("threshold_seconds"), "threshold_seconds");
        }
        if (cfg.threshold_seconds <= 0) throw ValidationError("threshold_seconds", "must be positive");
    });
    attempt([&] { cfg.evaluation_year = json_io::read<int>(j, "evaluation_year", "config", cfg.evaluation_year); });
    attempt([&] {
        if (!j.contains("limits")) return;
        const auto& l = j.at("limits");
        cfg.limits.max_segments = json_io::read<std::size_t>(l, "max_segments", "limits", cfg.limits.max_segments);
        cfg.limits.max_parsings = json_io::read<std::size_t>(l, "max_parsings", "limits", cfg.limits.max_parsings);
        if (cfg.limits.max_segments < 1) throw ValidationError("limits.max_segments", "must be at least 1");
    });
    attempt([&] {
        if (!j.contains("oracle")) return;
        const auto& o = j.at("oracle");
        cfg.oracle_trials = json_io::read<std::size_t>(o, "trials", "oracle", cfg.oracle_trials);
        cfg.oracle_seed = json_io::read<std::uint64_t>(o, "seed", "oracle", cfg.oracle_seed);
        if (cfg.oracle_trials < 1) throw ValidationError("oracle.trials", "must be at least 1");
    });
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

inline json to_json(const EngineConfig& cfg) {
    json j;
    j["version"] = kConfigVersion;
    j["alphabet"] = write_alphabet(cfg.alphabet);
    j["policy"] = {{"min_length", cfg.min_length}, {"max_length", cfg.max_length}};
    j["rules"] = json::array();
    for (const auto& r : cfg.rules) j["rules"].push_back(write_rule(r));
    j["topology"] = cfg.topology;
    j["protection_functions"] = json::array();
    for (const auto& f : cfg.protection_functions) j["protection_functions"].push_back(write_protection(f));
    j["adversaries"] = json::array();
    for (const auto& a : cfg.adversaries) j["adversaries"].push_back(write_adversary(a));
    j["protection"] = cfg.protection;
    j["adversary"] = cfg.adversary;
    j["threshold_seconds"] = json_io::write_rational(cfg.threshold_seconds);
    j["evaluation_year"] = cfg.evaluation_year;
    j["limits"] = {{"max_segments", cfg.limits.max_segments}, {"max_parsings", cfg.limits.max_parsings}};
    j["oracle"] = {{"trials", cfg.oracle_trials}, {"seed", cfg.oracle_seed}};
    return j;
}

inline EngineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

} // namespace pwfat

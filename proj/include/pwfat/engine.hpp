#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwfat/complexity.hpp"
#include "pwfat/config.hpp"
#include "pwfat/evaluator.hpp"
#include "pwfat/fat_oracle.hpp"
#include "pwfat/records.hpp"
#include "pwfat/strength.hpp"
#include "pwfat/wordlist.hpp"

namespace pwfat {

// Per-request overrides of the configured defaults (all by preset id).
struct ScoreOptions {
    std::optional<std::string> protection;
    std::optional<std::string> adversary;
    std::optional<Rational> threshold_seconds;
    std::optional<int> evaluation_year;
};

struct ScoreResult {
    ComplexityReport complexity;
    StrengthVerdict verdict;
};

// Used when no config file is given: printable ASCII, lengths 1..16, short
// digit strings and lowercase words as the only structure.
inline EngineConfig default_config() {
    EngineConfig cfg;
    cfg.alphabet = AlphabetSpec{"printable", std::nullopt};
    RuleDefinition digits;
    digits.id = "digits";
    digits.kind = GeneratorKind::CharClassLengthRange;
    digits.alphabet = AlphabetSpec{"digits", std::nullopt};
    digits.min_length = 1;
    digits.max_length = 4;
    RuleDefinition lower;
    lower.id = "lower";
    lower.kind = GeneratorKind::CharClassLengthRange;
    lower.alphabet = AlphabetSpec{"lower", std::nullopt};
    lower.min_length = 1;
    lower.max_length = 8;
    cfg.rules = {digits, lower};
    return cfg;
}

// Parse, price, test, over an immutable rule database.
// Safe to share between threads once constructed.
class Engine {
public:
    explicit Engine(EngineConfig config) : config_(std::move(config)) {
        bounds_ = PolicyBounds(config_.min_length, config_.max_length, config_.alphabet.build());
        std::vector<ConfigError::Issue> issues;
        std::vector<RuleRef> rules;
        for (const auto& def : config_.rules) {
            try {
                rules.push_back(build_rule(def));
            } catch (const ValidationError& e) {
                issues.push_back({"rules." + def.id, e.what()});
            }
        }
        if (!issues.empty()) throw ConfigError(std::move(issues));
        rules_ = RuleCombination(std::move(rules));
        if (!config_.topology.empty()) {
            std::vector<RuleRef> ordered;
            for (const auto& id : config_.topology) {
                const RuleRef* r = rules_.find(id);
                if (!r) throw ValidationError("topology", "unknown rule '" + id + "'");
                ordered.push_back(*r);
            }
            topology_ = Topology(std::move(ordered));
        }
        for (auto a : config_.adversaries) {
            a.rules = rules_;
            a.topology = topology_;
            adversaries_.emplace(a.id, std::move(a));
        }
        for (const auto& f : config_.protection_functions) protections_.emplace(f.id, f);
        protection(config_.protection);
        adversary(config_.adversary);
    }

    static Engine from_file(const std::filesystem::path& path) { return Engine(load_config(path)); }

    const EngineConfig& config() const noexcept { return config_; }
    const PolicyBounds& bounds() const noexcept { return bounds_; }
    const RuleCombination& rules() const noexcept { return rules_; }
    const std::optional<Topology>& topology() const noexcept { return topology_; }

    const ProtectionFunction& protection(const std::string& id) const {
        const auto it = protections_.find(id);
        if (it == protections_.end()) throw ValidationError("protection", "unknown protection function '" + id + "'");
        return it->second;
    }

    const AdversaryModel& adversary(const std::string& id) const {
        const auto it = adversaries_.find(id);
        if (it == adversaries_.end()) throw ValidationError("adversary", "unknown adversary '" + id + "'");
        return it->second;
    }

    ComplexityReport complexity(std::string_view password) const {
        return complexity_report(password, rules_, bounds_, topology_ ? &*topology_ : nullptr, config_.limits);
    }

    // eta_used is the minimum of every estimate computed.
    ScoreResult score(std::string_view password, const ScoreOptions& options = {}) const {
        ScoreResult out;
        out.complexity = complexity(password);
        const auto& f = protection(options.protection.value_or(config_.protection));
        const auto& a = adversary(options.adversary.value_or(config_.adversary));
        const Rational threshold = options.threshold_seconds.value_or(config_.threshold_seconds);
        const int year = options.evaluation_year.value_or(config_.evaluation_year);
        out.verdict = fat_strength_test(out.complexity.eta_final, f, a, year, threshold);
        return out;
    }

    json score_record(std::string_view password, const ScoreOptions& options = {}) const {
        const auto result = score(password, options);
        return records::score(result.complexity, result.verdict);
    }

    // Config echo without wordlist paths or contents.
    json redacted_config() const {
        json j{{"record", "config"}, {"version", records::kRecordVersion}};
        j["alphabet"] = {{"name", bounds_.alphabet->name()}, {"size", bounds_.alphabet->size()}};
        j["policy"] = {{"min_length", bounds_.min_length}, {"max_length", bounds_.max_length}};
        j["eta_upper"] = eta_upper(bounds_).to_string();
        j["eta_upper_bits"] = eta_upper(bounds_).log2();
        j["rules"] = json::array();
        for (const auto& r : rules_.rules()) {
            j["rules"].push_back({{"id", r->id()},
                                  {"kind", std::string(to_string(r->kind()))},
                                  {"cardinality", r->cardinality().to_string()},
                                  {"cardinality_exact", r->cardinality_exact()}});
        }
        j["topology"] = config_.topology;
        j["protection_functions"] = json::array();
        for (const auto& f : config_.protection_functions) j["protection_functions"].push_back(write_protection(f));
        j["adversaries"] = json::array();
        for (const auto& a : config_.adversaries) j["adversaries"].push_back(write_adversary(a));
        j["defaults"] = {{"protection", config_.protection},
                         {"adversary", config_.adversary},
                         {"threshold_seconds", to_string(config_.threshold_seconds)},
                         {"evaluation_year", config_.evaluation_year}};
        j["limits"] = {{"max_segments", config_.limits.max_segments}, {"max_parsings", config_.limits.max_parsings}};
        j["estimators"] = estimator_ids();
        return j;
    }

    ExperimentSpec oracle_template(const ScoreOptions& options = {}) const {
        ExperimentSpec spec;
        spec.alphabet = bounds_.alphabet;
        spec.protection = protection(options.protection.value_or(config_.protection));
        spec.adversary = adversary(options.adversary.value_or(config_.adversary));
        spec.threshold_seconds = options.threshold_seconds.value_or(config_.threshold_seconds);
        spec.year = options.evaluation_year.value_or(config_.evaluation_year);
        spec.seed = config_.oracle_seed;
        return spec;
    }

    std::vector<std::string> estimator_ids() const { return {"engine", "engine-min", "length8"}; }

    EstimatorAdapter estimator(const std::string& id) const {
        if (id == "engine" || id == "engine-self") return estimators::order_aware(bounds_);
        if (id == "engine-min") return estimators::min_estimate(bounds_, config_.limits);
        if (id == "length8") return estimators::length_threshold(8);
        throw ValidationError("estimator", "unknown estimator '" + id + "'");
    }

    EvaluationReport evaluate(const std::string& estimator_id, const std::vector<std::string>& test_set,
                              const ScoreOptions& options = {}, const EpsilonFn& epsilon_fn = default_epsilon) const {
        const auto adapter = estimator(estimator_id);
        if (test_set.empty()) throw ValidationError("test_set", "must not be empty");
        return pwfat::evaluate(adapter, test_set, oracle_template(options), epsilon_fn, config_.oracle_trials);
    }

private:
    RuleRef build_rule(const RuleDefinition& def) const {
        const AlphabetRef alphabet = def.alphabet ? def.alphabet->build() : bounds_.alphabet;
        const AuxConstraint aux = def.aux();
        const auto words = [&] {
            if (!def.path) return def.entries;
            std::filesystem::path p(*def.path);
            if (p.is_relative()) p = config_.base_dir / p;
            return load_wordlist(p);
        };
        switch (def.kind) {
        case GeneratorKind::Wordlist:
            return Rule::wordlist(def.id, alphabet, words(), aux);
        case GeneratorKind::CharClassLengthRange:
            return Rule::char_class(def.id, alphabet, aux);
        case GeneratorKind::MangledWordlist:
            return Rule::mangled(def.id, alphabet, words(), def.transforms, aux);
        case GeneratorKind::ExternalEnumerable:
            break;
        }
        throw ValidationError("rules." + def.id, "external rules cannot be built from config");
    }

    EngineConfig config_;
    PolicyBounds bounds_;
    RuleCombination rules_;
    std::optional<Topology> topology_;
    std::map<std::string, AdversaryModel> adversaries_;
    std::map<std::string, ProtectionFunction> protections_;
};

} // namespace pwfat

#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"

#include "pwfat/complexity.hpp"
#include "pwfat/evaluator.hpp"
#include "pwfat/fat_oracle.hpp"
#include "pwfat/strength.hpp"

// Machine-readable records. Field names are part of the public interface
// (CLI --json output, HTTP bodies, evaluation reports); bump kRecordVersion
// when they change.
namespace pwfat::records {

using json = nlohmann::json;

inline constexpr int kRecordVersion = 1;

inline json bits(const Cardinality& c) {
    if (c.is_unbounded()) return nullptr;
    return c.log2();
}

inline json segment_costs(const std::vector<SegmentCost>& costs) {
    json out = json::array();
    for (const auto& s : costs) {
        out.push_back({{"segment", utf8::encode(s.segment)},
                       {"rule", s.rule_id ? *s.rule_id : std::string("fallback")},
                       {"cardinality", s.cost.to_string()},
                       {"bits", bits(s.cost)}});
    }
    return out;
}

inline json complexity(const ComplexityReport& r) {
    json j;
    j["eta_upper"] = r.eta_upper.to_string();
    j["eta_upper_bits"] = bits(r.eta_upper);
    j["eta_lower_rule"] = r.eta_lower_rule.to_string();
    j["eta_lower_rule_bits"] = bits(r.eta_lower_rule);
    j["eta_chain"] = r.eta_chain.to_string();
    j["eta_chain_bits"] = bits(r.eta_chain);
    j["eta_order_aware"] = r.eta_order_aware ? json(r.eta_order_aware->to_string()) : json(nullptr);
    j["eta_order_aware_bits"] = r.eta_order_aware ? bits(*r.eta_order_aware) : json(nullptr);
    j["eta_order_unknown"] = r.eta_order_unknown.to_string();
    j["eta_order_unknown_bits"] = bits(r.eta_order_unknown);
    j["eta_final"] = r.eta_final.to_string();
    j["eta_final_bits"] = bits(r.eta_final);
    j["normalized"] = r.normalized;
    j["minimizing_parsing"] = r.minimizing_parsing ? json(to_line(*r.minimizing_parsing)) : json(nullptr);
    j["per_segment_costs"] = segment_costs(r.per_segment_costs);
    j["truncated"] = r.truncated;
    return j;
}

inline json verdict(const StrengthVerdict& v) {
    json j;
    j["hypothesis"] = std::string(to_string(v.hypothesis));
    j["fat_strong"] = v.fat_strong();
    if (v.estimated_ttc.unbounded) {
        j["estimated_ttc_seconds"] = "unbounded";
        j["estimated_ttc_seconds_approx"] = nullptr;
    } else {
        j["estimated_ttc_seconds"] = to_string(v.estimated_ttc.seconds);
        j["estimated_ttc_seconds_approx"] = v.estimated_ttc.approx_seconds();
    }
    j["threshold_seconds"] = to_string(v.threshold_seconds);
    j["evaluation_year"] = v.evaluation_year;
    j["eta_used"] = v.eta_used.to_string();
    j["eta_used_bits"] = bits(v.eta_used);
    j["protection"] = v.protection_id;
    j["adversary"] = v.adversary_id;
    return j;
}

inline json score(const ComplexityReport& report, const StrengthVerdict& v) {
    json j{{"record", "score"}, {"version", kRecordVersion}};
    j.update(complexity(report));
    j["verdict"] = verdict(v);
    return j;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline json experiment_spec(const ExperimentSpec& spec) {
    return {{"record", "experiment_spec"},
            {"version", kRecordVersion},
            {"alphabet", spec.alphabet ? spec.alphabet->name() : std::string()},
            {"protection", spec.protection.id},
            {"cost_model_seconds_per_guess", to_string(spec.protection.cost_seconds_per_guess)},
            {"adversary", spec.adversary.id},
            {"baseline_guess_rate", to_string(spec.adversary.baseline_guess_rate)},
            {"target", hex64(spec.target)},
            {"threshold_seconds", to_string(spec.threshold_seconds)},
            {"evaluation_year", spec.evaluation_year()},
            {"seed", spec.seed},
            {"guess_budget", guess_budget(spec).str()}};
}

// The cracked candidate is never written out; only whether one was found.
inline json experiment_outcome(const ExperimentOutcome& o) {
    return {{"record", "experiment_outcome"},
            {"version", kRecordVersion},
            {"result", o.result},
            {"guesses_used", o.guesses_used.str()},
            {"cracked", o.cracked_candidate.has_value()},
            {"elapsed_simulated_seconds", to_string(o.elapsed_simulated_seconds)}};
}

inline json evaluation(const EvaluationReport& r) {
    json j{{"record", "evaluation"},
           {"version", kRecordVersion},
           {"estimator", r.estimator_id},
           {"test_set_size", r.test_set_size},
           {"false_secure_fraction", to_string(r.false_secure_fraction)},
           {"false_insecure_fraction", to_string(r.false_insecure_fraction)},
           {"correct_fraction", to_string(r.correct_fraction)},
           {"epsilon", to_string(r.epsilon)},
           {"reliable", r.reliable},
           {"inclusive", r.inclusive},
           {"accurate", r.accurate},
           {"estimator_errors", r.estimator_errors}};
    json rows = json::array();
    for (const auto& rec : r.records) {
        rows.push_back({{"index", rec.index},
                        {"oracle_secure", rec.oracle_secure},
                        {"oracle_mean", to_string(rec.oracle_mean)},
                        {"mark", rec.mark ? json(*rec.mark) : json(nullptr)},
                        {"estimator_error", !rec.mark.has_value()},
                        {"outcome", std::string(to_string(rec.outcome))}});
    }
    j["per_password_records"] = rows;
    return j;
}

inline std::string evaluation_table(const EvaluationReport& r) {
    std::ostringstream os;
    char line[160];
    os << "estimator: " << r.estimator_id << "   |P| = " << r.test_set_size << "   epsilon = " << to_string(r.epsilon)
       << "\n";
    std::snprintf(line, sizeof line, "%-22s %-12s %-10s %s\n", "metric", "fraction", "decimal", "verdict");
    os << line;
    const auto row = [&](const char* name, const Rational& f, bool ok, const char* yes, const char* no) {
        std::snprintf(line, sizeof line, "%-22s %-12s %-10.4f %s\n", name, to_string(f).c_str(), to_double(f),
                      ok ? yes : no);
        os << line;
    };
    row("false secure", r.false_secure_fraction, r.reliable, "reliable", "NOT reliable");
    row("false insecure", r.false_insecure_fraction, r.inclusive, "inclusive", "NOT inclusive");
    row("correct", r.correct_fraction, r.accurate, "accurate", "NOT accurate");
    if (r.estimator_errors > 0) os << "estimator errors: " << r.estimator_errors << "\n";
    return os.str();
}

} // namespace pwfat::records

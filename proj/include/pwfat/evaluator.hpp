#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pwfat/complexity.hpp"
#include "pwfat/fat_oracle.hpp"
#include "pwfat/strength.hpp"

namespace pwfat {

// What an estimator sees: the same inputs the FAT experiment gets.
struct MarkInput {
    const Alphabet& alphabet;
    const ProtectionFunction& protection;
    const AdversaryModel& adversary;
    std::string_view password;
    const Rational& threshold_seconds;
    int year;
    const std::map<std::string, std::string>& aux;
};

// mark() returns 1 when the estimator considers the password FAT-secure.
struct EstimatorAdapter {
    std::string id;
    std::function<int(const MarkInput&)> mark;
};

using EpsilonFn = std::function<Rational(std::size_t)>;

inline Rational default_epsilon(std::size_t test_set_size) { return Rational(1) / Rational(test_set_size); }

enum class MarkOutcome { Correct, FalseSecure, FalseInsecure };

inline std::string_view to_string(MarkOutcome o) {
    switch (o) {
    case MarkOutcome::Correct: return "correct";
    case MarkOutcome::FalseSecure: return "false_secure";
    case MarkOutcome::FalseInsecure: return "false_insecure";
    }
    return "correct";
}

struct PasswordRecord {
    std::size_t index = 0;  // position in the test set; passwords are not retained
    bool oracle_secure = false;
    Rational oracle_mean = 0;
    std::optional<int> mark;  // nullopt: the estimator failed on this password
    MarkOutcome outcome = MarkOutcome::Correct;
};

struct EvaluationReport {
    std::string estimator_id;
    std::size_t test_set_size = 0;
    Rational false_secure_fraction = 0;
    Rational false_insecure_fraction = 0;
    Rational correct_fraction = 0;
    Rational epsilon = 0;
    bool reliable = false;
    bool inclusive = false;
    bool accurate = false;
    std::size_t estimator_errors = 0;
    std::vector<PasswordRecord> records;
};

namespace detail {

// Runs body(i) for i in [0, n) over a few worker threads; results are written
// by index so the output order never depends on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace detail

// Scores an estimator against oracle ground truth. An estimator failure (an
// exception or a mark outside {0, 1}) is recorded and counted as the wrong
// answer for that password, so it lands in whichever failure fraction applies.
inline EvaluationReport evaluate(const EstimatorAdapter& estimator, const std::vector<std::string>& test_set,
                                 const ExperimentSpec& oracle_template, const EpsilonFn& epsilon_fn = default_epsilon,
                                 std::size_t trials = 1) {
    if (test_set.empty()) {
        throw ValidationError("test_set", "must not be empty");
    }
    if (!estimator.mark) {
        throw ValidationError("estimator." + estimator.id, "has no mark function");
    }
    const std::size_t n = test_set.size();
    EvaluationReport report;
    report.estimator_id = estimator.id;
    report.test_set_size = n;
    report.records.resize(n);

    const int year = oracle_template.evaluation_year();
    detail::parallel_for(n, [&](std::size_t i) {
        PasswordRecord& rec = report.records[i];
        rec.index = i;
        const SecurityEstimate truth = fat_secure(test_set[i], oracle_template, trials);
        rec.oracle_secure = truth.secure;
        rec.oracle_mean = truth.mean;
        try {
            const MarkInput input{*oracle_template.alphabet, oracle_template.protection, oracle_template.adversary,
                                  test_set[i],               oracle_template.threshold_seconds, year,
                                  oracle_template.adversary.aux};
            const int m = estimator.mark(input);
            if (m == 0 || m == 1) rec.mark = m;
        } catch (...) {
            rec.mark.reset();
        }
        const bool says_secure = rec.mark ? *rec.mark == 1 : !rec.oracle_secure;
        if (says_secure == rec.oracle_secure) {
            rec.outcome = MarkOutcome::Correct;
        } else {
            rec.outcome = says_secure ? MarkOutcome::FalseSecure : MarkOutcome::FalseInsecure;
        }
    });

    std::size_t false_secure = 0;
    std::size_t false_insecure = 0;
    for (const auto& rec : report.records) {
        if (!rec.mark) ++report.estimator_errors;
        if (rec.outcome == MarkOutcome::FalseSecure) ++false_secure;
        if (rec.outcome == MarkOutcome::FalseInsecure) ++false_insecure;
    }
    const Rational size(n);
    report.false_secure_fraction = Rational(false_secure) / size;
    report.false_insecure_fraction = Rational(false_insecure) / size;
    report.correct_fraction = Rational(n - false_secure - false_insecure) / size;
    report.epsilon = epsilon_fn(n);
    report.reliable = report.false_secure_fraction <= report.epsilon;
    report.inclusive = report.false_insecure_fraction <= report.epsilon;
    report.accurate = report.reliable && report.inclusive;
    return report;
}

namespace estimators {

// This engine's hypothesis test. Uses the order-aware complexity along the
// adversary's topology, or the best-order complexity when the adversary has
// none, which mirrors how the simulated adversary guesses.
inline EstimatorAdapter order_aware(PolicyBounds bounds) {
    return {"engine", [bounds](const MarkInput& in) {
                const Cardinality eta = in.adversary.topology
                                            ? eta_order_aware(in.password, *in.adversary.topology, bounds)
                                            : in.adversary.rules.empty()
                                                  ? eta_upper(bounds)
                                                  : eta_order_unknown(in.password, in.adversary.rules, bounds);
                return fat_strength_test(eta, in.protection, in.adversary, in.year, in.threshold_seconds).fat_strong()
                           ? 1
                           : 0;
            }};
}

// The hypothesis test fed with the minimum of every complexity estimate,
// including the chain rule.
inline EstimatorAdapter min_estimate(PolicyBounds bounds, EnumerationLimits limits = {}) {
    return {"engine-min", [bounds, limits](const MarkInput& in) {
                const Topology* topology = in.adversary.topology ? &*in.adversary.topology : nullptr;
                const auto report = complexity_report(in.password, in.adversary.rules, bounds, topology, limits);
                return fat_strength_test(report.eta_final, in.protection, in.adversary, in.year, in.threshold_seconds)
                               .fat_strong()
                           ? 1
                           : 0;
            }};
}

// Baseline meter: secure iff the password has at least min_length characters.
inline EstimatorAdapter length_threshold(std::size_t min_length = 8) {
    return {"length" + std::to_string(min_length), [min_length](const MarkInput& in) {
                return utf8::decode(in.password).size() >= min_length ? 1 : 0;
            }};
}

} // namespace estimators

} // namespace pwfat

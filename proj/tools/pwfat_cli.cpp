// pwfat: score passwords, evaluate estimators, serve the JSON API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pwfat/pwfat.hpp"
#include "pwfat/service.hpp"

namespace {

struct OverrideFlags {
    std::string protection;
    std::string adversary;
    std::string threshold;
    std::optional<int> year;

    pwfat::ScoreOptions options() const {
        pwfat::ScoreOptions o;
        if (!protection.empty()) o.protection = protection;
        if (!adversary.empty()) o.adversary = adversary;
        if (!threshold.empty()) {
            o.threshold_seconds = pwfat::parse_rational(threshold);
            if (*o.threshold_seconds <= 0) throw pwfat::ValidationError("threshold", "must be positive");
        }
        o.evaluation_year = year;
        return o;
    }
};

void add_override_flags(CLI::App* cmd, OverrideFlags& flags) {
    cmd->add_option("--protection", flags.protection, "Protection function preset id");
    cmd->add_option("--adversary", flags.adversary, "Adversary preset id");
    cmd->add_option("--threshold", flags.threshold, "Acceptable time-to-crack T in seconds (e.g. 7776000, 1e6, 1/3)");
    cmd->add_option("--year", flags.year, "Evaluation year");
}

pwfat::Engine load_engine(const std::string& config_path) {
    if (config_path.empty()) return pwfat::Engine(pwfat::default_config());
    return pwfat::Engine::from_file(config_path);
}

std::string read_password(const std::string& arg) {
    if (arg != "-") return arg;
    std::string line;
    std::getline(std::cin, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string fmt_bits(const pwfat::Cardinality& c) {
    if (c.is_unbounded()) return "unbounded";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f bits", c.log2());
    return buf;
}

void print_text(const pwfat::ScoreResult& r) {
    const auto& c = r.complexity;
    std::printf("eta_upper          %s\n", fmt_bits(c.eta_upper).c_str());
    std::printf("eta_lower_rule     %s\n", fmt_bits(c.eta_lower_rule).c_str());
    std::printf("eta_chain          %s%s\n", fmt_bits(c.eta_chain).c_str(),
                c.truncated ? "  (upper bound: segment limit reached)" : "");
    if (c.eta_order_aware) std::printf("eta_order_aware    %s\n", fmt_bits(*c.eta_order_aware).c_str());
    std::printf("eta_order_unknown  %s\n", fmt_bits(c.eta_order_unknown).c_str());
    std::printf("normalized         %.4f\n", c.normalized);
    if (c.minimizing_parsing) {
        std::printf("parsing            %s\n", pwfat::to_line(*c.minimizing_parsing).c_str());
        for (const auto& s : c.per_segment_costs) {
            std::printf("  %-16s %-12s %s\n", pwfat::utf8::encode(s.segment).c_str(),
                        s.rule_id ? s.rule_id->c_str() : "fallback", fmt_bits(s.cost).c_str());
        }
    }
    const auto& v = r.verdict;
    std::printf("verdict            %s (%s)\n", std::string(pwfat::to_string(v.hypothesis)).c_str(),
                v.fat_strong() ? "FAT-strong" : "not FAT-strong");
    if (v.estimated_ttc.unbounded) {
        std::printf("time to crack      unbounded\n");
    } else {
        std::printf("time to crack      %.4g s\n", v.estimated_ttc.approx_seconds());
    }
    std::printf("threshold T        %.4g s   [%s / %s, %d]\n", pwfat::to_double(v.threshold_seconds),
                v.adversary_id.c_str(), v.protection_id.c_str(), v.evaluation_year);
}

std::pair<std::string, int> split_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw pwfat::ValidationError("bind", "expected HOST:PORT");
    try {
        return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
    } catch (const std::exception&) {
        throw pwfat::ValidationError("bind", "invalid port");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-based password complexity and FAT-strength estimation"};
    app.require_subcommand(1);

    std::string password_arg;
    std::string score_config;
    bool score_json = false;
    OverrideFlags score_flags;
    auto* score = app.add_subcommand("score", "Score one password (use '-' to read it from stdin)");
    score->add_option("password", password_arg, "Password, or '-' for stdin")->required();
    score->add_option("--config", score_config, "Engine config file");
    score->add_flag("--json", score_json, "Print the machine-readable score record");
    add_override_flags(score, score_flags);

    std::string estimator_id;
    std::string set_path;
    std::string eval_config;
    std::string report_path;
    bool eval_json = false;
    OverrideFlags eval_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate an estimator against the cracking simulator");
    evaluate->add_option("--estimator", estimator_id, "Estimator id (engine, engine-self, engine-min, length8)")->required();
    evaluate->add_option("--set", set_path, "Test set in wordlist format")->required();
    evaluate->add_option("--config", eval_config, "Engine config file")->required();
    evaluate->add_option("--report", report_path, "Write the evaluation record to this file");
    evaluate->add_flag("--json", eval_json, "Print the evaluation record instead of the table");
    add_override_flags(evaluate, eval_flags);

    std::string serve_config;
    std::string bind = "127.0.0.1:8080";
    auto* serve = app.add_subcommand("serve", "Serve the /v1 JSON API");
    serve->add_option("--config", serve_config, "Engine config file")->required();
    serve->add_option("--bind", bind, "HOST:PORT to listen on");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*score) {
            const auto engine = load_engine(score_config);
            const std::string password = read_password(password_arg);
            const auto options = score_flags.options();
            if (score_json) {
                std::cout << engine.score_record(password, options).dump() << "\n";
            } else {
                print_text(engine.score(password, options));
            }
        } else if (*evaluate) {
            const auto engine = load_engine(eval_config);
            const auto test_set = pwfat::load_wordlist(set_path);
            if (test_set.empty()) throw pwfat::ValidationError("set", "test set is empty");
            const auto report = engine.evaluate(estimator_id, test_set, eval_flags.options());
            const auto record = pwfat::records::evaluation(report);
            if (!report_path.empty()) {
                std::ofstream out(report_path);
                if (!out) throw pwfat::ValidationError("report", "cannot write '" + report_path + "'");
                out << record.dump(2) << "\n";
            }
            if (eval_json) {
                std::cout << record.dump() << "\n";
            } else {
                std::cout << pwfat::records::evaluation_table(report);
            }
            return report.accurate ? 0 : 1;
        } else if (*serve) {
            auto engine = std::make_shared<const pwfat::Engine>(pwfat::Engine::from_file(serve_config));
            const auto [host, port] = split_bind(bind);
            pwfat::ScoreService service(engine);
            std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), port);
            service.run(host, port);
        }
    } catch (const pwfat::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "pwfat/engine.hpp"

namespace pwfat {

// Receives one line per request. Lines carry method, path, status and
// latency only, never request bodies.
using LogSink = std::function<void(std::string_view)>;

inline LogSink stderr_log() {
    return [](std::string_view line) { std::fprintf(stderr, "%.*s\n", static_cast<int>(line.size()), line.data()); };
}

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// Reads optional preset overrides from a score request (or CLI flags mapped
// to the same names).
inline ScoreOptions read_score_options(const json& j) {
    ScoreOptions o;
    if (j.contains("protection")) o.protection = json_io::require<std::string>(j, "protection", "request");
    if (j.contains("adversary")) o.adversary = json_io::require<std::string>(j, "adversary", "request");
    if (j.contains("threshold_seconds")) {
        o.threshold_seconds = json_io::read_rational(j.at("threshold_seconds"), "request.threshold_seconds");
        if (*o.threshold_seconds <= 0) throw ValidationError("request.threshold_seconds", "must be positive");
    }
    if (j.contains("evaluation_year")) o.evaluation_year = json_io::require<int>(j, "evaluation_year", "request");
    return o;
}

// Stateless JSON API over a shared engine:
//   POST /v1/score   {"password": "...", optional preset overrides}
//   GET  /v1/config  redacted config echo
//   GET  /v1/health  "ok"
class ScoreService {
public:
    explicit ScoreService(std::shared_ptr<const Engine> engine, LogSink log = stderr_log())
        : engine_(std::move(engine)), log_(std::move(log)) {}

    ~ScoreService() { stop(); }

    ScoreService(const ScoreService&) = delete;
    ScoreService& operator=(const ScoreService&) = delete;

    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body) const {
        const auto started = std::chrono::steady_clock::now();
        HttpResponse response = route(method, path, body);
        if (log_) {
            const auto micros =
                std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
            log_(std::string(method) + " " + std::string(path) + " " + std::to_string(response.status) + " " +
                 std::to_string(micros.count()) + "us");
        }
        return response;
    }

    // Binds and serves on a background thread; returns the bound port
    // (useful with port 0).
    int start(const std::string& host, int port) {
        stop();
        server_ = std::make_unique<httplib::Server>();
        install_routes(*server_);
        const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
        if (bound < 0) {
            throw ValidationError("bind", "cannot bind " + host + ":" + std::to_string(port));
        }
        thread_ = std::thread([this] { server_->listen_after_bind(); });
        server_->wait_until_ready();
        return bound;
    }

    // Blocking variant for the CLI.
    void run(const std::string& host, int port) {
        server_ = std::make_unique<httplib::Server>();
        install_routes(*server_);
        if (!server_->listen(host, port)) {
            throw ValidationError("bind", "cannot bind " + host + ":" + std::to_string(port));
        }
    }

    void stop() {
        if (server_) server_->stop();
        if (thread_.joinable()) thread_.join();
        server_.reset();
    }

private:
    static HttpResponse error(int status, const std::string& code, const std::string& message) {
        return {status, "application/json", json{{"error", {{"code", code}, {"message", message}}}}.dump()};
    }

    HttpResponse route(std::string_view method, std::string_view path, std::string_view body) const {
        try {
            if (path == "/v1/health") {
                if (method != "GET") return error(405, "method_not_allowed", "use GET");
                return {200, "text/plain", "ok"};
            }
            if (path == "/v1/config") {
                if (method != "GET") return error(405, "method_not_allowed", "use GET");
                return {200, "application/json", engine_->redacted_config().dump()};
            }
            if (path == "/v1/score") {
                if (method != "POST") return error(405, "method_not_allowed", "use POST");
                return score(body);
            }
            return error(404, "not_found", "no such endpoint");
        } catch (...) {
            return error(500, "internal", "internal error");
        }
    }

    HttpResponse score(std::string_view body) const {
        json request;
        try {
            request = json::parse(body);
        } catch (const json::exception&) {
            return error(400, "malformed_request", "body must be a JSON object");
        }
        if (!request.is_object() || !request.contains("password") || !request.at("password").is_string()) {
            return error(400, "malformed_request", "'password' must be a string");
        }
        const auto password = request.at("password").get<std::string>();
        if (password.empty()) {
            return error(400, "validation", "password must not be empty");
        }
        try {
            const ScoreOptions options = read_score_options(request);
            return {200, "application/json", engine_->score_record(password, options).dump()};
        } catch (const ValidationError& e) {
            // field names only; messages can quote config values but never the password
            return error(400, "validation", "invalid " + e.field());
        }
    }

    void install_routes(httplib::Server& server) {
        const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            const HttpResponse r = handle(req.method, req.path, req.body);
            res.status = r.status;
            res.set_content(r.body, r.content_type.c_str());
        };
        server.Get("/v1/health", forward);
        server.Get("/v1/config", forward);
        server.Post("/v1/score", forward);
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                res.set_content(json{{"error", {{"code", "not_found"}, {"message", "no such endpoint"}}}}.dump(),
                                "application/json");
            }
        });
    }

    std::shared_ptr<const Engine> engine_;
    LogSink log_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace pwfat

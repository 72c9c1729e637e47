#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rtsplan/planner.hpp"

namespace rtsplan {

// Chat-completion client: one user message per planning event, retried with
// exponential backoff on transport failures and 429/5xx responses. Client
// errors (auth, bad request) fail immediately. Safe to share across match
// workers; each call opens its own connection.
class HttpChatClient {
public:
    explicit HttpChatClient(PlannerConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.endpoint_base.empty()) {
            const char* base = std::getenv("RTSPLAN_API_BASE");
            if (base) cfg_.endpoint_base = base;
        }
        if (cfg_.endpoint_base.empty())
            throw PlannerError("llm client: no endpoint (set RTSPLAN_API_BASE or config)");
        split_base(cfg_.endpoint_base, origin_, path_prefix_);
    }

    std::string operator()(const PromptContext& ctx) const { return query(ctx.prompt); }

    std::string query(const std::string& prompt) const {
        nlohmann::json body{{"model", cfg_.model},
                            {"temperature", cfg_.temperature},
                            {"max_tokens", cfg_.max_tokens},
                            {"messages", nlohmann::json::array({nlohmann::json{
                                             {"role", "user"}, {"content", prompt}}})}};
        const std::string payload = body.dump();

        std::string last_error;
        int delay_ms = cfg_.backoff_ms;
        for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
            if (attempt > 1) {
                std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
                delay_ms *= 2;
            }
            httplib::Client client(origin_);
            client.set_connection_timeout(10);
            client.set_read_timeout(120);
            httplib::Headers headers;
            if (!cfg_.api_key_env.empty()) {
                if (const char* key = std::getenv(cfg_.api_key_env.c_str()))
                    headers.emplace("Authorization", std::string("Bearer ") + key);
            }
            auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                                   "application/json");
            if (!res) {
                last_error = "transport: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "http " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw PlannerError("llm client: http " + std::to_string(res->status) + ": " +
                                   res->body);
            try {
                nlohmann::json doc = nlohmann::json::parse(res->body);
                return doc.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw PlannerError(std::string("llm client: malformed response: ") + e.what());
            }
        }
        throw PlannerError("llm client: retries exhausted (" + last_error + ")");
    }

private:
    static void split_base(const std::string& base, std::string& origin, std::string& prefix) {
        size_t scheme = base.find("://");
        size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        size_t slash = base.find('/', host_start);
        if (slash == std::string::npos) {
            origin = base;
            prefix.clear();
        } else {
            origin = base.substr(0, slash);
            prefix = base.substr(slash);
            while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        }
    }

    PlannerConfig cfg_;
    std::string origin_;
    std::string path_prefix_;
};

}  // namespace rtsplan

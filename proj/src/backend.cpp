#include "epsim/backend.hpp"

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <thread>

namespace epsim {

using nlohmann::json;

std::string request_hash(const ChatRequest& request) {
    json j{{"system", request.system_prompt},
           {"user", request.user_prompt},
           {"temperature", request.temperature},
           {"max_tokens", request.max_tokens},
           {"tag", request.request_tag}};
    return sha256_hex(j.dump());
}

bool accept_any(const std::string& text) { return !trim(text).empty(); }

// ---------------------------------------------------------------------------
// HTTP backend

HttpBackend::HttpBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpBackend::complete(const ChatRequest& request) {
    json body{{"model", endpoint_.model},
              {"messages",
               json::array({{{"role", "system"}, {"content", request.system_prompt}},
                            {{"role", "user"}, {"content", request.user_prompt}}})},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};

    httplib::Client client(endpoint_.base_url);
    client.set_connection_timeout(endpoint_.timeout_ms / 1000,
                                  (endpoint_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(endpoint_.timeout_ms / 1000,
                            (endpoint_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (const char* token = std::getenv(endpoint_.auth_token_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + token);

    auto res = client.Post("/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res)
        throw TransportError("no response from " + endpoint_.base_url + ": " +
                             httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("HTTP " + std::to_string(res->status) + " from " +
                             endpoint_.base_url + ": " + res->body);
    try {
        json j = json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed completion payload: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Mock backend

MockScript MockScript::load(const std::filesystem::path& file) {
    json root;
    try {
        root = json::parse(read_file(file));
    } catch (const json::exception& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("schema", "") != "epsim-mockscript-v1")
        throw SchemaError(file.string() + ": expected schema 'epsim-mockscript-v1'");
    MockScript script;
    for (const json& jr : root.value("rules", json::array())) {
        MockRule rule;
        rule.match = jr.at("match").get<std::string>();
        for (const json& r : jr.value("responses", json::array()))
            rule.responses.push_back(r.get<std::string>());
        rule.transport_error = jr.value("transport_error", false);
        script.rules.push_back(std::move(rule));
    }
    return script;
}

namespace {

std::string json_escape(const std::string& s) {
    return json(s).dump();  // includes the surrounding quotes
}

}  // namespace

std::string MockBackend::synthesize(const ChatRequest& request) const {
    // Content depends on the prompts only, not the request tag: repeated
    // prompts for the same cell draw the same synthetic answer, so
    // mock-backed runs are perfectly stable across repeats.
    const std::uint64_t h =
        fnv1a64(request.system_prompt + "\x1f" + request.user_prompt);
    SplitMix64 rng(h);

    const std::string& user = request.user_prompt;
    const bool wants_vote = user.find("FOR, AGAINST, or ABSTENTION") != std::string::npos;
    const bool wants_counterfactual =
        user.find("opposite stance") != std::string::npos;
    const bool wants_stance =
        user.find("IN FAVOR, AGAINST, or NEUTRAL") != std::string::npos;
    const bool wants_summary = user.find("Summarize") != std::string::npos;

    if (wants_vote) {
        const double u = rng.unit();
        const char* vote = u < 0.77 ? "FOR" : (u < 0.94 ? "AGAINST" : "ABSTENTION");
        if (user.find("\"reasoning\"") != std::string::npos) {
            std::string persona = request.system_prompt.substr(
                0, std::min<std::size_t>(request.system_prompt.size(), 160));
            std::string reasoning =
                "Synthetic reasoning for a deterministic test backend. Persona: " +
                persona;
            return std::string("{\"reasoning\": ") + json_escape(reasoning) +
                   ", \"vote\": \"" + vote + "\"}";
        }
        return std::string("{\"vote\": \"") + vote + "\"}";
    }
    if (wants_counterfactual) {
        const double u = rng.unit();
        const char* stance = u < 0.67 ? "IN FAVOR" : (u < 0.99 ? "AGAINST" : "NEUTRAL");
        std::string speech =
            "Synthetic opposite-stance speech generated by the mock backend "
            "(request " +
            std::to_string(h % 100000) + ").";
        return std::string("{\"stance\": \"") + stance + "\", \"speech\": " +
               json_escape(speech) + "}";
    }
    if (wants_stance) {
        const double u = rng.unit();
        return u < 0.67 ? "IN FAVOR" : (u < 0.99 ? "AGAINST" : "NEUTRAL");
    }
    if (wants_summary) {
        std::string head = user.substr(0, std::min<std::size_t>(user.size(), 200));
        return "Deterministic mock summary: " + head;
    }
    return "ok";
}

std::string MockBackend::complete(const ChatRequest& request) {
    const std::string key = request_hash(request);
    int attempt = 0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        attempt = attempt_counts_[key]++;
    }
    for (const MockRule& rule : script_.rules) {
        if (request.request_tag.find(rule.match) == std::string::npos &&
            request.system_prompt.find(rule.match) == std::string::npos &&
            request.user_prompt.find(rule.match) == std::string::npos)
            continue;
        if (rule.transport_error)
            throw TransportError("scripted transport error for '" + rule.match + "'");
        if (rule.responses.empty()) break;  // fall through to synthesis
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(attempt),
                                  rule.responses.size() - 1);
        return rule.responses[idx];
    }
    return synthesize(request);
}

// ---------------------------------------------------------------------------
// Client with policy, cache, and in-flight gate

class ChatClient::Gate {
public:
    explicit Gate(int limit) : limit_(limit > 0 ? limit : 1) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < limit_; });
        ++in_flight_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            --in_flight_;
        }
        cv_.notify_one();
    }

    struct Hold {
        Gate& gate;
        explicit Hold(Gate& g) : gate(g) { gate.acquire(); }
        ~Hold() { gate.release(); }
    };

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int limit_;
    int in_flight_ = 0;
};

namespace {

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

ChatClient::ChatClient(std::shared_ptr<ChatBackend> backend, RetryPolicy policy,
                       std::optional<std::filesystem::path> cache_dir,
                       int max_in_flight)
    : backend_(std::move(backend)),
      policy_(policy),
      cache_dir_(std::move(cache_dir)),
      gate_(std::make_shared<Gate>(max_in_flight)) {
    if (cache_dir_) std::filesystem::create_directories(*cache_dir_);
}

std::optional<std::string> ChatClient::cache_lookup(const std::string& key) const {
    if (!cache_dir_) return std::nullopt;
    const auto file = *cache_dir_ / (key + ".json");
    if (!std::filesystem::exists(file)) return std::nullopt;
    try {
        json j = json::parse(read_file(file));
        if (j.value("accepted", false)) return j.at("response").get<std::string>();
    } catch (...) {
        // Unreadable record: treat as a miss and recompute.
    }
    return std::nullopt;
}

void ChatClient::cache_store(
    const std::string& key, const ChatRequest& request, const std::string& response,
    const std::vector<std::pair<std::string, bool>>& attempts) const {
    if (!cache_dir_) return;
    json attempt_log = json::array();
    for (const auto& [text, accepted] : attempts)
        attempt_log.push_back({{"text", text}, {"accepted", accepted}});
    json record{{"schema", "epsim-cache-v1"},
                {"key", key},
                {"request",
                 {{"system", request.system_prompt},
                  {"user", request.user_prompt},
                  {"temperature", request.temperature},
                  {"max_tokens", request.max_tokens},
                  {"tag", request.request_tag}}},
                {"response", response},
                {"accepted", true},
                {"attempts", std::move(attempt_log)},
                {"stored_at", now_iso8601()}};
    write_file_atomic(*cache_dir_ / (key + ".json"), record.dump(2) + "\n");
}

std::string ChatClient::complete_with_policy(const ChatRequest& request,
                                             const Validator& validator) {
    const std::string key = request_hash(request);
    if (auto cached = cache_lookup(key)) return *cached;

    std::vector<std::pair<std::string, bool>> attempts;
    std::vector<std::string> rejected;

    for (int format_attempt = 0; format_attempt <= policy_.max_format_retries;
         ++format_attempt) {
        std::string response;
        bool got_response = false;
        auto backoff = policy_.initial_backoff;
        for (int transport_attempt = 0;; ++transport_attempt) {
            try {
                Gate::Hold hold(*gate_);
                backend_calls_.fetch_add(1);
                response = backend_->complete(request);
                got_response = true;
                break;
            } catch (const TransportError& e) {
                if (transport_attempt >= policy_.max_transport_retries)
                    throw TransportError(std::string(e.what()) + " (after " +
                                         std::to_string(transport_attempt + 1) +
                                         " attempts)");
                std::this_thread::sleep_for(backoff);
                backoff = std::chrono::milliseconds(static_cast<long>(
                    static_cast<double>(backoff.count()) * policy_.backoff_factor));
            }
        }
        if (!got_response) break;  // unreachable; keeps the flow obvious

        const bool ok = validator(response);
        attempts.emplace_back(response, ok);
        if (ok) {
            cache_store(key, request, response, attempts);
            return response;
        }
        rejected.push_back(response);
    }

    throw FormatViolation("validator rejected all " +
                              std::to_string(rejected.size()) + " attempts for '" +
                              request.request_tag + "'",
                          std::move(rejected));
}

}  // namespace epsim

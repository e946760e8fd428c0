#pragma once

#include "epsim/errors.hpp"
#include "epsim/util.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace epsim {

struct ChatRequest {
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.6;
    int max_tokens = 1024;
    std::string request_tag;  // opaque cache key component (e.g. grid cell id)
};

// Stable cache key over all request fields, including the tag.
std::string request_hash(const ChatRequest& request);

struct RetryPolicy {
    int max_format_retries = 3;  // re-sends of the identical request
    int max_transport_retries = 4;
    std::chrono::milliseconds initial_backoff{200};
    double backoff_factor = 2.0;
};

// A single chat-completion transport. Implementations must be thread-safe.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Returns the raw assistant text. Throws TransportError on failure.
    virtual std::string complete(const ChatRequest& request) = 0;

    virtual std::string name() const = 0;
};

struct HttpEndpoint {
    std::string base_url;  // e.g. http://localhost:8000/v1
    std::string model;
    std::string auth_token_env = "EPSIM_API_TOKEN";  // only env var we read
    int timeout_ms = 120000;
};

// OpenAI-compatible chat-completions client
// (POST {base_url}/chat/completions).
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpEndpoint endpoint);
    std::string complete(const ChatRequest& request) override;
    std::string name() const override { return "http:" + endpoint_.model; }

private:
    HttpEndpoint endpoint_;
};

// Scripted, deterministic backend for tests and offline runs.
//
// Rules are matched in order against the request tag, then system and user
// prompt; the first matching rule answers. A rule's responses are indexed by
// the per-request attempt count (clamped to the last entry), so retry
// behavior can be scripted. Without a matching rule the backend synthesizes
// a deterministic response from the request hash.
struct MockRule {
    std::string match;
    std::vector<std::string> responses;
    bool transport_error = false;  // raise TransportError instead of answering
};

struct MockScript {
    std::vector<MockRule> rules;

    static MockScript load(const std::filesystem::path& file);
};

class MockBackend : public ChatBackend {
public:
    MockBackend() = default;
    explicit MockBackend(MockScript script) : script_(std::move(script)) {}

    std::string complete(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

private:
    std::string synthesize(const ChatRequest& request) const;

    MockScript script_;
    std::mutex mutex_;
    std::map<std::string, int> attempt_counts_;
};

// Backend wrapper adding the retry policy, the response cache, and the
// global in-flight limit.
class ChatClient {
public:
    // Accept/reject decision on a raw response text.
    using Validator = std::function<bool(const std::string&)>;

    ChatClient(std::shared_ptr<ChatBackend> backend, RetryPolicy policy,
               std::optional<std::filesystem::path> cache_dir,
               int max_in_flight = 4);

    // Returns the first response the validator accepts. Every attempt is
    // recorded in the cache record's attempt log; accepted responses are
    // cached under the request hash. Throws FormatViolation (carrying all
    // rejected texts) or TransportError.
    std::string complete_with_policy(const ChatRequest& request,
                                     const Validator& validator);

    // Completions actually served by the backend (cache hits excluded).
    std::size_t backend_calls() const { return backend_calls_.load(); }

    const RetryPolicy& policy() const { return policy_; }
    ChatBackend& backend() { return *backend_; }

private:
    std::optional<std::string> cache_lookup(const std::string& key) const;
    void cache_store(const std::string& key, const ChatRequest& request,
                     const std::string& response,
                     const std::vector<std::pair<std::string, bool>>& attempts) const;

    std::shared_ptr<ChatBackend> backend_;
    RetryPolicy policy_;
    std::optional<std::filesystem::path> cache_dir_;
    std::atomic<std::size_t> backend_calls_{0};

    class Gate;
    std::shared_ptr<Gate> gate_;
};

// Accepts any non-empty response; the simulator installs stricter parsers.
bool accept_any(const std::string& text);

}  // namespace epsim

#pragma once
// Uniform access to chat-completion providers: token budgeting, truncation
// detection, single-round continuation, bounded retries and a deterministic
// scripted mock for tests and offline runs.

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace litrev {

struct ModelProfile {
    std::string endpoint_id = "default";
    std::string model = "mock";
    int context_window = 128000;
    int max_output = 16384;
    double temperature = 0.2;
    std::optional<int> seed;

    // throws std::invalid_argument unless 0 < max_output < context_window
    void validate() const;
};

// Per-role model selection; roles may share the default profile.
struct AgentModelConfig {
    ModelProfile default_profile;
    std::map<std::string, ModelProfile> overrides;

    const ModelProfile& profile_for(const std::string& role) const;
};

struct ChatMessage {
    std::string role;  // "user" | "assistant" | "system"
    std::string text;
};

struct TokenUsage {
    int input_tokens = 0;
    int output_tokens = 0;
};

struct Completion {
    std::string text;
    bool truncated = false;  // true iff output token count reached max_output
    TokenUsage usage;
};

struct ChatRequest {
    ModelProfile profile;
    std::string system;
    std::vector<ChatMessage> messages;
    // Caller role/purpose, e.g. "subsection_writer:2.3". Carried as metadata:
    // the mock matches rules on it, HTTP providers ignore it.
    std::string tag;
};

class GatewayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Transient transport failure; the gateway retries these.
class TransportError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

// Prompt rejected before dispatch for exceeding the context budget.
class BudgetError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

// Raw provider interface. Implementations must be safe for concurrent send().
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual Completion send(const ChatRequest& request) = 0;
};

using TokenEstimator = std::function<int(std::string_view)>;

// Default estimator: ceil(chars / 4). Monotone in length; "" -> 0.
int estimate_tokens(std::string_view text);

struct FitResult {
    std::vector<std::string> documents;  // longest prefix within budget
    int used_tokens = 0;
    // set when the first document alone exceeds the budget
    bool first_too_large = false;
};

// Longest prefix of `documents` whose summed token estimates stay <= budget.
// Never reorders, never splits a document. budget must be positive.
FitResult fit_to_budget(const std::vector<std::string>& documents, int budget,
                        const TokenEstimator& estimator = estimate_tokens);

// One record per dispatched provider call, for tracing.
struct CallRecord {
    std::string tag;
    std::string model;
    int est_prompt_tokens = 0;
    int context_window = 0;
    int max_output = 0;
    int output_tokens = 0;
    bool truncated = false;
    bool continuation = false;
    int attempts = 1;
};

struct GatewayOptions {
    int max_attempts = 3;          // transport retries
    int backoff_initial_ms = 100;  // doubled per retry
    int max_in_flight = 8;
    TokenEstimator estimator = estimate_tokens;
};

struct ContinuationOutcome {
    Completion completion;         // stitched text
    bool continuation_used = false;
    bool still_truncated = false;  // both rounds hit max_output; warning case
};

class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<ChatClient> client, GatewayOptions options = {});

    // Estimated prompt size as dispatched (system + every message).
    int prompt_tokens(const std::string& system,
                      const std::vector<ChatMessage>& messages) const;

    // Throws BudgetError when the prompt exceeds context_window - max_output,
    // TransportError after retries are exhausted.
    Completion complete(const ModelProfile& profile, const std::string& system,
                        const std::vector<ChatMessage>& messages,
                        const std::string& tag = "");

    // Requests the continuation of `prior`, which must be truncated
    // (std::logic_error otherwise). Returns only the new tail; callers
    // concatenate prior.text + result.text.
    Completion continue_completion(const ModelProfile& profile, const std::string& system,
                                   const std::vector<ChatMessage>& messages,
                                   const Completion& prior, const std::string& tag = "");

    // complete() plus at most one continuation round. When the continuation
    // is itself truncated the stitched partial result is returned with
    // still_truncated set.
    ContinuationOutcome complete_full(const ModelProfile& profile, const std::string& system,
                                      const std::vector<ChatMessage>& messages,
                                      const std::string& tag = "");

    void set_observer(std::function<void(const CallRecord&)> observer);
    const TokenEstimator& estimator() const { return options_.estimator; }

    // Marker the gateway appends as the final user message of a continuation
    // request. Mock providers key off it.
    static const std::string& continuation_instruction();

private:
    Completion dispatch(const ChatRequest& request, bool continuation);

    std::shared_ptr<ChatClient> client_;
    GatewayOptions options_;
    std::function<void(const CallRecord&)> observer_;
    std::mutex observer_mutex_;

    // bounded in-flight requests
    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    int in_flight_ = 0;
};

// -------------------------------------------------------------------------
// Scripted mock provider.
//
// Rules are evaluated in order against the request; the first match wins.
// A rule matches when its tag (if any) equals the request tag and every
// `contains` string occurs in the rendered request text. Responses longer
// than the profile's max_output are cut at the token boundary and flagged
// truncated; continuation requests receive the remaining tail. The provider
// is stateless: identical requests always produce identical completions.
// -------------------------------------------------------------------------

struct MockRule {
    std::string name;
    std::string tag;                    // empty = any tag
    std::vector<std::string> contains;  // all must occur in the request text
    std::string response;
    bool is_default = false;
};

class ScriptedChatClient : public ChatClient {
public:
    explicit ScriptedChatClient(std::vector<MockRule> rules);

    // Loads {"rules": [{name?, tag?, contains?, response | response_lines,
    // default?}, ...]} from a JSON script file.
    static std::shared_ptr<ScriptedChatClient> from_file(const std::filesystem::path& path);

    Completion send(const ChatRequest& request) override;

private:
    const MockRule* match(const ChatRequest& request) const;
    std::vector<MockRule> rules_;
};

// OpenAI-compatible /chat/completions provider. Reads the credential from
// the environment (LITREV_API_KEY) unless one is passed explicitly.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(std::string base_url, std::string api_key = "");
    Completion send(const ChatRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

}  // namespace litrev

#include "litrev/gateway.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace litrev {

namespace {

// RAII slot for the bounded in-flight window.
class SlotGuard {
public:
    SlotGuard(std::mutex& m, std::condition_variable& cv, int& in_flight, int limit)
        : mutex_(m), cv_(cv), in_flight_(in_flight) {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < limit; });
        ++in_flight_;
    }
    ~SlotGuard() {
        {
            std::lock_guard lock(mutex_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex& mutex_;
    std::condition_variable& cv_;
    int& in_flight_;
};

std::string render_request_text(const ChatRequest& request) {
    std::string text = request.system;
    for (const auto& m : request.messages) {
        text.push_back('\n');
        text += m.text;
    }
    return text;
}

}  // namespace

void ModelProfile::validate() const {
    if (max_output <= 0 || max_output >= context_window)
        throw std::invalid_argument("model profile '" + model +
                                    "': requires 0 < max_output < context_window");
}

const ModelProfile& AgentModelConfig::profile_for(const std::string& role) const {
    auto it = overrides.find(role);
    return it != overrides.end() ? it->second : default_profile;
}

int estimate_tokens(std::string_view text) {
    return static_cast<int>((text.size() + 3) / 4);
}

FitResult fit_to_budget(const std::vector<std::string>& documents, int budget,
                        const TokenEstimator& estimator) {
    if (budget <= 0) throw std::invalid_argument("fit_to_budget: budget must be positive");
    FitResult result;
    for (const auto& doc : documents) {
        const int cost = estimator(doc);
        if (result.used_tokens + cost > budget) {
            if (result.documents.empty()) result.first_too_large = true;
            break;
        }
        result.documents.push_back(doc);
        result.used_tokens += cost;
    }
    return result;
}

const std::string& LlmGateway::continuation_instruction() {
    static const std::string kInstruction =
        "Your previous response was cut off. Continue exactly where it stopped, "
        "without repeating any earlier text.";
    return kInstruction;
}

LlmGateway::LlmGateway(std::shared_ptr<ChatClient> client, GatewayOptions options)
    : client_(std::move(client)), options_(std::move(options)) {
    if (!client_) throw std::invalid_argument("gateway requires a chat client");
    if (options_.max_in_flight < 1) options_.max_in_flight = 1;
}

int LlmGateway::prompt_tokens(const std::string& system,
                              const std::vector<ChatMessage>& messages) const {
    int total = options_.estimator(system);
    for (const auto& m : messages) total += options_.estimator(m.text);
    return total;
}

Completion LlmGateway::dispatch(const ChatRequest& request, bool continuation) {
    request.profile.validate();
    const int est = prompt_tokens(request.system, request.messages);
    const int budget = request.profile.context_window - request.profile.max_output;
    if (est > budget) {
        throw BudgetError("prompt for '" + request.tag + "' estimated at " +
                          std::to_string(est) + " tokens exceeds budget " +
                          std::to_string(budget));
    }

    Completion completion;
    int attempt = 1;
    for (;; ++attempt) {
        try {
            SlotGuard slot(slots_mutex_, slots_cv_, in_flight_, options_.max_in_flight);
            completion = client_->send(request);
            break;
        } catch (const TransportError&) {
            if (attempt >= options_.max_attempts) throw;
            std::this_thread::sleep_for(
                std::chrono::milliseconds(options_.backoff_initial_ms << (attempt - 1)));
        }
    }

    std::function<void(const CallRecord&)> observer;
    {
        std::lock_guard lock(observer_mutex_);
        observer = observer_;
    }
    if (observer) {
        CallRecord record;
        record.tag = request.tag;
        record.model = request.profile.model;
        record.est_prompt_tokens = est;
        record.context_window = request.profile.context_window;
        record.max_output = request.profile.max_output;
        record.output_tokens = completion.usage.output_tokens;
        record.truncated = completion.truncated;
        record.continuation = continuation;
        record.attempts = attempt;
        observer(record);
    }
    return completion;
}

Completion LlmGateway::complete(const ModelProfile& profile, const std::string& system,
                                const std::vector<ChatMessage>& messages,
                                const std::string& tag) {
    return dispatch({profile, system, messages, tag}, false);
}

Completion LlmGateway::continue_completion(const ModelProfile& profile,
                                           const std::string& system,
                                           const std::vector<ChatMessage>& messages,
                                           const Completion& prior, const std::string& tag) {
    if (!prior.truncated)
        throw std::logic_error("continue_completion: prior completion was not truncated");
    std::vector<ChatMessage> extended = messages;
    extended.push_back({"assistant", prior.text});
    extended.push_back({"user", continuation_instruction()});
    return dispatch({profile, system, extended, tag}, true);
}

ContinuationOutcome LlmGateway::complete_full(const ModelProfile& profile,
                                              const std::string& system,
                                              const std::vector<ChatMessage>& messages,
                                              const std::string& tag) {
    ContinuationOutcome outcome;
    outcome.completion = complete(profile, system, messages, tag);
    if (!outcome.completion.truncated) return outcome;

    Completion tail = continue_completion(profile, system, messages, outcome.completion, tag);
    outcome.continuation_used = true;
    outcome.still_truncated = tail.truncated;
    outcome.completion.text += tail.text;
    outcome.completion.truncated = tail.truncated;
    outcome.completion.usage.input_tokens += tail.usage.input_tokens;
    outcome.completion.usage.output_tokens += tail.usage.output_tokens;
    return outcome;
}

void LlmGateway::set_observer(std::function<void(const CallRecord&)> observer) {
    std::lock_guard lock(observer_mutex_);
    observer_ = std::move(observer);
}

// ---------------------------------------------------------------------------
// ScriptedChatClient
// ---------------------------------------------------------------------------

ScriptedChatClient::ScriptedChatClient(std::vector<MockRule> rules) : rules_(std::move(rules)) {}

std::shared_ptr<ScriptedChatClient> ScriptedChatClient::from_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GatewayError("cannot open mock script: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError("mock script " + path.string() + ": " + e.what());
    }
    std::vector<MockRule> rules;
    for (const auto& entry : doc.value("rules", nlohmann::json::array())) {
        MockRule rule;
        rule.name = entry.value("name", "");
        rule.tag = entry.value("tag", "");
        rule.is_default = entry.value("default", false);
        if (entry.contains("contains"))
            for (const auto& c : entry.at("contains")) rule.contains.push_back(c.get<std::string>());
        if (entry.contains("response_lines")) {
            std::string joined;
            for (const auto& line : entry.at("response_lines")) {
                if (!joined.empty()) joined.push_back('\n');
                joined += line.get<std::string>();
            }
            rule.response = joined;
        } else {
            rule.response = entry.value("response", "");
        }
        rules.push_back(std::move(rule));
    }
    return std::make_shared<ScriptedChatClient>(std::move(rules));
}

const MockRule* ScriptedChatClient::match(const ChatRequest& request) const {
    const std::string text = render_request_text(request);
    const MockRule* fallback = nullptr;
    for (const auto& rule : rules_) {
        if (rule.is_default) {
            if (!fallback) fallback = &rule;
            continue;
        }
        if (!rule.tag.empty() && rule.tag != request.tag) continue;
        bool ok = true;
        for (const auto& needle : rule.contains) {
            if (text.find(needle) == std::string::npos) {
                ok = false;
                break;
            }
        }
        if (ok) return &rule;
    }
    return fallback;
}

Completion ScriptedChatClient::send(const ChatRequest& request) {
    // A continuation request carries the partial output as a trailing
    // assistant turn followed by the continuation instruction. Strip both to
    // recover the original request, then serve the remaining tail.
    std::string partial;
    ChatRequest lookup = request;
    const auto& msgs = request.messages;
    if (msgs.size() >= 2 && msgs.back().text == LlmGateway::continuation_instruction() &&
        msgs[msgs.size() - 2].role == "assistant") {
        partial = msgs[msgs.size() - 2].text;
        lookup.messages.assign(msgs.begin(), msgs.end() - 2);
    }

    const MockRule* rule = match(lookup);
    if (!rule)
        throw GatewayError("mock script has no rule for tag '" + request.tag +
                           "' and no default rule");

    std::string full = rule->response;
    if (!partial.empty()) {
        if (full.rfind(partial, 0) == 0)
            full = full.substr(partial.size());
        else
            full.clear();  // partial does not belong to this rule; nothing to add
    }

    Completion completion;
    const int max_output = request.profile.max_output;
    const std::size_t char_limit = static_cast<std::size_t>(max_output) * 4;
    if (full.size() > char_limit) full = full.substr(0, char_limit);
    completion.text = std::move(full);
    completion.usage.input_tokens = estimate_tokens(render_request_text(request));
    completion.usage.output_tokens = estimate_tokens(completion.text);
    completion.truncated = completion.usage.output_tokens >= max_output;
    return completion;
}

// ---------------------------------------------------------------------------
// HttpChatClient
// ---------------------------------------------------------------------------

HttpChatClient::HttpChatClient(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {
    if (api_key_.empty()) {
        if (const char* env = std::getenv("LITREV_API_KEY")) api_key_ = env;
    }
}

Completion HttpChatClient::send(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = request.profile.model;
    body["max_tokens"] = request.profile.max_output;
    body["temperature"] = request.profile.temperature;
    if (request.profile.seed) body["seed"] = *request.profile.seed;
    auto messages = nlohmann::json::array();
    if (!request.system.empty())
        messages.push_back({{"role", "system"}, {"content", request.system}});
    for (const auto& m : request.messages)
        messages.push_back({{"role", m.role}, {"content", m.text}});
    body["messages"] = std::move(messages);

    httplib::Client client(base_url_);
    client.set_read_timeout(300, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post("/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw TransportError("chat endpoint unreachable: " + base_url_);
    if (res->status >= 500 || res->status == 429)
        throw TransportError("chat endpoint returned status " + std::to_string(res->status));
    if (res->status != 200)
        throw GatewayError("chat endpoint returned status " + std::to_string(res->status) +
                           ": " + res->body);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed chat response: ") + e.what());
    }

    Completion completion;
    const auto& choice = doc.at("choices").at(0);
    completion.text = choice.at("message").value("content", "");
    completion.truncated = choice.value("finish_reason", "") == "length";
    if (doc.contains("usage")) {
        completion.usage.input_tokens = doc["usage"].value("prompt_tokens", 0);
        completion.usage.output_tokens = doc["usage"].value("completion_tokens", 0);
    } else {
        completion.usage.output_tokens = estimate_tokens(completion.text);
    }
    return completion;
}

}  // namespace litrev

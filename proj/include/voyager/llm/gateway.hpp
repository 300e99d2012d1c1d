// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voyager::llm {

enum class Role { curriculum, codegen, verifier, qa_ask, qa_answer, describe, decompose };
inline constexpr std::array<Role, 7> all_roles{Role::curriculum, Role::qa_ask,   Role::qa_answer, Role::codegen,
                                               Role::verifier,   Role::describe, Role::decompose};

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view text);

/// 0.1 for the curriculum, 0 for everything else.
double policy_temperature(Role r);

struct ChatRequest {
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.0;
    Role role = Role::codegen;

    /// Stable over (role, system, user, temperature); the cassette key.
    std::string digest() const;
};

/// Request at the policy temperature for its role.
ChatRequest make_request(Role role, std::string system_prompt, std::string user_prompt);

struct Usage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    friend bool operator==(const Usage&, const Usage&) = default;
};

struct ChatResponse {
    std::string text;
    Usage usage;
    std::string provider_id;
    std::chrono::milliseconds latency{0};
};

class GatewayError : public std::runtime_error {
public:
    explicit GatewayError(const std::string& message, int status = 0) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class ReplayError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string id() const = 0;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

using Embedding = std::vector<double>;

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string id() const = 0;
    virtual std::size_t dimension() const = 0;
    /// Unit-norm vector of dimension(). Throws GatewayError on empty text or provider failure.
    virtual Embedding embed(std::string_view text) const = 0;
};

/// Feature hash of lower-cased word unigrams and bigrams, unit-normalized. Hermetic.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
    std::string id() const override;
    std::size_t dimension() const override { return dimension_; }
    Embedding embed(std::string_view text) const override;

private:
    std::size_t dimension_;
};

double cosine(const Embedding& a, const Embedding& b);
void normalize(Embedding& v);

/// Canned responses per role. Queued texts are served first, then the role's handler.
class ScriptedProvider final : public ChatProvider {
public:
    using Handler = std::function<std::string(const ChatRequest&)>;

    std::string id() const override { return "scripted"; }
    ChatResponse complete(const ChatRequest& request) override;

    void push(Role role, std::string text);
    void on(Role role, Handler handler);
    std::size_t pending(Role role) const;

private:
    mutable std::mutex mu_;
    std::map<Role, std::vector<std::string>> queued_;
    std::map<Role, std::size_t> served_;
    std::map<Role, Handler> handlers_;
};

struct RetryPolicy {
    int max_attempts = 4;
    std::chrono::milliseconds base{500};
    double factor = 2.0;
    std::chrono::milliseconds cap{8000};

    /// Wait before retry number `attempt` (1-based). No jitter.
    std::chrono::milliseconds delay(int attempt) const;
};

struct HttpReply {
    int status = 0; // 0: connection failure
    std::string body;
};

struct LiveConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    std::map<Role, std::string> models; // missing roles use default_model
    std::string default_model = "gpt-4";
    std::string embedding_model = "text-embedding-ada-002";
    std::size_t embedding_dimension = 1536;
    std::chrono::seconds timeout{120};
    RetryPolicy retry;
};

/// POST (path, json body) -> reply. The default performs HTTPS/HTTP via cpp-httplib.
using Transport = std::function<HttpReply(const std::string& path, const std::string& body)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

Transport http_transport(const LiveConfig& config);

/// Chat-completions over HTTP with exponential backoff on 429, 5xx and connection failures.
class LiveProvider final : public ChatProvider {
public:
    explicit LiveProvider(LiveConfig config, Transport transport = {}, Sleeper sleeper = {});
    std::string id() const override { return "live"; }
    ChatResponse complete(const ChatRequest& request) override;
    const LiveConfig& config() const { return config_; }

    /// Shared retry loop, also used by LiveEmbedder.
    HttpReply post_with_retry(const std::string& path, const std::string& body) const;

private:
    LiveConfig config_;
    Transport transport_;
    Sleeper sleeper_;
};

class LiveEmbedder final : public Embedder {
public:
    explicit LiveEmbedder(std::shared_ptr<LiveProvider> provider) : provider_(std::move(provider)) {}
    std::string id() const override;
    std::size_t dimension() const override { return provider_->config().embedding_dimension; }
    Embedding embed(std::string_view text) const override;

private:
    std::shared_ptr<LiveProvider> provider_;
};

struct CassetteEntry {
    std::string digest;
    Role role = Role::codegen;
    double temperature = 0.0;
    std::string text;
    Usage usage;

    friend bool operator==(const CassetteEntry&, const CassetteEntry&) = default;
};

/// Line-delimited JSON records, one per exchange.
struct Cassette {
    std::vector<CassetteEntry> entries;

    static Cassette load(const std::string& path);
    void save(const std::string& path) const;
    static std::string to_line(const CassetteEntry& e);
    static CassetteEntry from_line(std::string_view line);
};

class ReplayProvider final : public ChatProvider {
public:
    /// strict: the next request must match the next entry. relaxed: any unused entry with the digest.
    ReplayProvider(Cassette cassette, bool strict = true) : cassette_(std::move(cassette)), strict_(strict) {}
    std::string id() const override { return "replay"; }
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::mutex mu_;
    Cassette cassette_;
    bool strict_;
    std::size_t cursor_ = 0;
    std::vector<bool> used_;
};

struct RoleUsage {
    long long calls = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    friend bool operator==(const RoleUsage&, const RoleUsage&) = default;
};

using UsageReport = std::map<Role, RoleUsage>;

struct Exchange {
    ChatRequest request;
    ChatResponse response;
};

/// Single entry point for chat and embedding calls. Thread-safe.
class Gateway {
public:
    Gateway(std::shared_ptr<ChatProvider> provider, std::shared_ptr<Embedder> embedder);

    /// Rejects requests whose temperature departs from the role policy unless overridden.
    ChatResponse chat(const ChatRequest& request);
    Embedding embed(std::string_view text) const;

    /// Appends every exchange to this cassette file (truncated on call).
    void record_to(const std::string& path);
    void allow_temperature_override(bool allow) { override_temperature_ = allow; }

    UsageReport account() const;
    std::vector<Exchange> transcript() const;
    Cassette cassette() const;
    const Embedder& embedder() const { return *embedder_; }
    std::string provider_id() const { return provider_->id(); }

private:
    std::shared_ptr<ChatProvider> provider_;
    std::shared_ptr<Embedder> embedder_;
    bool override_temperature_ = false;
    std::optional<std::string> record_path_;
    mutable std::mutex mu_;
    UsageReport usage_;
    std::vector<Exchange> transcript_;
};

} // namespace voyager::llm

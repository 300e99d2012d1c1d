// SPDX-License-Identifier: Apache-2.0
#include "voyager/llm/gateway.hpp"

#include "voyager/util/hash.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <thread>

namespace voyager::llm {

using json = nlohmann::json;

std::string_view to_string(Role r)
{
    switch (r) {
    case Role::curriculum: return "curriculum";
    case Role::codegen: return "codegen";
    case Role::verifier: return "verifier";
    case Role::qa_ask: return "qa_ask";
    case Role::qa_answer: return "qa_answer";
    case Role::describe: return "describe";
    case Role::decompose: return "decompose";
    }
    return "?";
}

std::optional<Role> parse_role(std::string_view text)
{
    for (auto r : all_roles)
        if (to_string(r) == text)
            return r;
    return std::nullopt;
}

double policy_temperature(Role r) { return r == Role::curriculum ? 0.1 : 0.0; }

std::string ChatRequest::digest() const
{
    // Length-prefixed so field boundaries cannot collide.
    auto key = fmt::format("{}\n{:.3f}\n{}:{}\n{}:{}", to_string(role), temperature, system_prompt.size(),
                           system_prompt, user_prompt.size(), user_prompt);
    return util::digest(key);
}

ChatRequest make_request(Role role, std::string system_prompt, std::string user_prompt)
{
    return {std::move(system_prompt), std::move(user_prompt), policy_temperature(role), role};
}

// ---- embeddings ----

namespace {

std::vector<std::string> words(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() > 3 && cur.back() == 's' && cur[cur.size() - 2] != 's')
            cur.pop_back();
        if (!cur.empty())
            out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

// camelCase identifiers are split so skill names embed like their words.
std::string decamel(std::string_view text)
{
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (i > 0 && std::isupper(c) && std::islower(static_cast<unsigned char>(text[i - 1])))
            out.push_back(' ');
        out.push_back(text[i]);
    }
    return out;
}

} // namespace

std::string HashEmbedder::id() const { return fmt::format("hash-ngram-{}", dimension_); }

Embedding HashEmbedder::embed(std::string_view text) const
{
    auto ws = words(decamel(text));
    if (ws.empty())
        throw GatewayError("embed: text has no words");
    Embedding v(dimension_, 0.0);
    auto add = [&](const std::string& feature, double weight) {
        auto h = util::fnv1a64(feature);
        auto slot = static_cast<std::size_t>(h % dimension_);
        v[slot] += (h >> 63) ? -weight : weight;
    };
    for (std::size_t i = 0; i < ws.size(); ++i) {
        add("u:" + ws[i], 1.0);
        if (i + 1 < ws.size())
            add("b:" + ws[i] + " " + ws[i + 1], 0.5);
    }
    normalize(v);
    return v;
}

void normalize(Embedding& v)
{
    double norm = 0;
    for (double x : v)
        norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) {
        if (!v.empty())
            v[0] = 1.0;
        return;
    }
    for (double& x : v)
        x /= norm;
}

double cosine(const Embedding& a, const Embedding& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument(fmt::format("cosine: dimension {} vs {}", a.size(), b.size()));
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0)
        return 0;
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

// ---- scripted ----

ChatResponse ScriptedProvider::complete(const ChatRequest& request)
{
    std::string text;
    Handler handler;
    {
        std::lock_guard lock(mu_);
        auto& q = queued_[request.role];
        auto& n = served_[request.role];
        if (n < q.size()) {
            text = q[n++];
        } else if (auto it = handlers_.find(request.role); it != handlers_.end()) {
            handler = it->second;
        } else {
            throw GatewayError(fmt::format("scripted provider has no response for role {}", to_string(request.role)));
        }
    }
    if (handler)
        text = handler(request);
    ChatResponse r;
    r.text = std::move(text);
    r.usage = {static_cast<long long>(util::estimate_tokens(request.system_prompt) +
                                      util::estimate_tokens(request.user_prompt)),
               static_cast<long long>(util::estimate_tokens(r.text))};
    r.provider_id = id();
    return r;
}

void ScriptedProvider::push(Role role, std::string text)
{
    std::lock_guard lock(mu_);
    queued_[role].push_back(std::move(text));
}

void ScriptedProvider::on(Role role, Handler handler)
{
    std::lock_guard lock(mu_);
    handlers_[role] = std::move(handler);
}

std::size_t ScriptedProvider::pending(Role role) const
{
    std::lock_guard lock(mu_);
    auto q = queued_.find(role);
    auto s = served_.find(role);
    std::size_t total = q == queued_.end() ? 0 : q->second.size();
    std::size_t used = s == served_.end() ? 0 : s->second;
    return total - used;
}

// ---- live ----

std::chrono::milliseconds RetryPolicy::delay(int attempt) const
{
    double ms = static_cast<double>(base.count()) * std::pow(factor, std::max(0, attempt - 1));
    return std::chrono::milliseconds(static_cast<long long>(std::min(ms, static_cast<double>(cap.count()))));
}

LiveProvider::LiveProvider(LiveConfig config, Transport transport, Sleeper sleeper)
    : config_(std::move(config)), transport_(std::move(transport)), sleeper_(std::move(sleeper))
{
    if (!transport_)
        transport_ = http_transport(config_);
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

HttpReply LiveProvider::post_with_retry(const std::string& path, const std::string& body) const
{
    HttpReply reply;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        reply = transport_(path, body);
        if (reply.status >= 200 && reply.status < 300)
            return reply;
        bool transient = reply.status == 0 || reply.status == 429 || reply.status >= 500;
        if (!transient)
            break;
        if (attempt < config_.retry.max_attempts)
            sleeper_(config_.retry.delay(attempt));
    }
    throw GatewayError(fmt::format("{} failed with status {}: {}", path, reply.status,
                                   reply.body.substr(0, std::min<std::size_t>(reply.body.size(), 200))),
                       reply.status);
}

ChatResponse LiveProvider::complete(const ChatRequest& request)
{
    auto model = config_.default_model;
    if (auto it = config_.models.find(request.role); it != config_.models.end())
        model = it->second;
    json body = {{"model", model},
                 {"temperature", request.temperature},
                 {"messages",
                  json::array({{{"role", "system"}, {"content", request.system_prompt}},
                               {{"role", "user"}, {"content", request.user_prompt}}})}};
    auto start = std::chrono::steady_clock::now();
    auto reply = post_with_retry("/chat/completions", body.dump());
    ChatResponse r;
    try {
        auto j = json::parse(reply.body);
        r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
            r.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0LL);
            r.usage.completion_tokens = j["usage"].value("completion_tokens", 0LL);
        }
    } catch (const json::exception& e) {
        throw GatewayError(fmt::format("malformed chat response: {}", e.what()), reply.status);
    }
    r.provider_id = fmt::format("live:{}", model);
    r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return r;
}

std::string LiveEmbedder::id() const { return "live:" + provider_->config().embedding_model; }

Embedding LiveEmbedder::embed(std::string_view text) const
{
    if (util::trim(text).empty())
        throw GatewayError("embed: empty text");
    json body = {{"model", provider_->config().embedding_model}, {"input", std::string(text)}};
    auto reply = provider_->post_with_retry("/embeddings", body.dump());
    Embedding v;
    try {
        v = json::parse(reply.body).at("data").at(0).at("embedding").get<Embedding>();
    } catch (const json::exception& e) {
        throw GatewayError(fmt::format("malformed embedding response: {}", e.what()), reply.status);
    }
    if (v.size() != dimension())
        throw GatewayError(fmt::format("embedding has dimension {}, expected {}", v.size(), dimension()));
    normalize(v);
    return v;
}

// ---- cassette ----

std::string Cassette::to_line(const CassetteEntry& e)
{
    json j = {{"digest", e.digest},
              {"role", std::string(to_string(e.role))},
              {"temperature", e.temperature},
              {"response", e.text},
              {"prompt_tokens", e.usage.prompt_tokens},
              {"completion_tokens", e.usage.completion_tokens}};
    return j.dump();
}

CassetteEntry Cassette::from_line(std::string_view line)
{
    try {
        auto j = json::parse(line);
        CassetteEntry e;
        e.digest = j.at("digest").get<std::string>();
        auto role = parse_role(j.at("role").get<std::string>());
        if (!role)
            throw GatewayError("cassette: unknown role " + j.at("role").get<std::string>());
        e.role = *role;
        e.temperature = j.at("temperature").get<double>();
        e.text = j.at("response").get<std::string>();
        e.usage = {j.value("prompt_tokens", 0LL), j.value("completion_tokens", 0LL)};
        return e;
    } catch (const json::exception& ex) {
        throw GatewayError(fmt::format("cassette: malformed record: {}", ex.what()));
    }
}

Cassette Cassette::load(const std::string& path)
{
    Cassette c;
    for (const auto& line : util::split_lines(util::read_file(path)))
        if (!util::trim(line).empty())
            c.entries.push_back(from_line(line));
    return c;
}

void Cassette::save(const std::string& path) const
{
    std::string out;
    for (const auto& e : entries)
        out += to_line(e) + "\n";
    util::write_file(path, out);
}

ChatResponse ReplayProvider::complete(const ChatRequest& request)
{
    std::lock_guard lock(mu_);
    used_.resize(cassette_.entries.size(), false);
    auto digest = request.digest();
    std::optional<std::size_t> hit;
    if (strict_) {
        if (cursor_ >= cassette_.entries.size())
            throw ReplayError(fmt::format("replay: cassette exhausted at request {} (digest {})", cursor_, digest));
        const auto& next = cassette_.entries[cursor_];
        if (next.digest != digest)
            throw ReplayError(fmt::format("replay: request {} has digest {}, cassette expects {}", cursor_, digest,
                                          next.digest));
        hit = cursor_++;
    } else {
        for (std::size_t i = 0; i < cassette_.entries.size(); ++i)
            if (!used_[i] && cassette_.entries[i].digest == digest) {
                hit = i;
                break;
            }
        if (!hit)
            throw ReplayError(fmt::format("replay: no unused entry with digest {}", digest));
    }
    used_[*hit] = true;
    const auto& e = cassette_.entries[*hit];
    return {e.text, e.usage, id(), std::chrono::milliseconds(0)};
}

// ---- gateway ----

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, std::shared_ptr<Embedder> embedder)
    : provider_(std::move(provider)), embedder_(std::move(embedder))
{
    if (!provider_ || !embedder_)
        throw std::invalid_argument("Gateway needs a provider and an embedder");
}

ChatResponse Gateway::chat(const ChatRequest& request)
{
    if (!override_temperature_ && std::abs(request.temperature - policy_temperature(request.role)) > 1e-12)
        throw GatewayError(fmt::format("temperature {} violates the policy for role {} (expected {})",
                                       request.temperature, to_string(request.role),
                                       policy_temperature(request.role)));
    auto response = provider_->complete(request);
    std::lock_guard lock(mu_);
    auto& u = usage_[request.role];
    ++u.calls;
    u.prompt_tokens += response.usage.prompt_tokens;
    u.completion_tokens += response.usage.completion_tokens;
    transcript_.push_back({request, response});
    if (record_path_) {
        CassetteEntry e{request.digest(), request.role, request.temperature, response.text, response.usage};
        std::ofstream out(*record_path_, std::ios::app | std::ios::binary);
        out << Cassette::to_line(e) << "\n";
        if (!out)
            throw GatewayError("cannot append to cassette " + *record_path_);
    }
    return response;
}

Embedding Gateway::embed(std::string_view text) const { return embedder_->embed(text); }

void Gateway::record_to(const std::string& path)
{
    util::write_file(path, "");
    std::lock_guard lock(mu_);
    record_path_ = path;
}

UsageReport Gateway::account() const
{
    std::lock_guard lock(mu_);
    UsageReport report;
    for (auto r : all_roles)
        report[r] = {};
    for (const auto& [r, u] : usage_)
        report[r] = u;
    return report;
}

std::vector<Exchange> Gateway::transcript() const
{
    std::lock_guard lock(mu_);
    return transcript_;
}

Cassette Gateway::cassette() const
{
    std::lock_guard lock(mu_);
    Cassette c;
    for (const auto& x : transcript_)
        c.entries.push_back(
            {x.request.digest(), x.request.role, x.request.temperature, x.response.text, x.response.usage});
    return c;
}

} // namespace voyager::llm

// SPDX-License-Identifier: Apache-2.0
#include "voyager/harness/service.hpp"

#include "voyager/craftworld/registry.hpp"
#include "voyager/util/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>

namespace voyager::harness {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

std::optional<json> body_json(const httplib::Request& req, httplib::Response& res)
{
    try {
        auto j = json::parse(req.body);
        if (!j.is_object())
            throw json::type_error::create(302, "body must be an object", nullptr);
        return j;
    } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
        return std::nullopt;
    }
}

std::size_t query_number(const httplib::Request& req, const std::string& key, std::size_t fallback)
{
    if (!req.has_param(key))
        return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(req.get_param_value(key)));
    } catch (const std::exception&) {
        return fallback;
    }
}

} // namespace

Service::Service(agent::LoopControl& control, agent::EventLog& events, curriculum::Curriculum* curriculum,
                 std::string static_dir)
    : control_(control), events_(events), curriculum_(curriculum), static_dir_(std::move(static_dir)),
      server_(std::make_unique<httplib::Server>())
{
    if (static_dir_.empty())
        static_dir_ = craftworld::data_path("web");
    routes();
}

Service::~Service()
{
    stop();
}

void Service::routes()
{
    auto& s = *server_;
    s.Get("/api/state", [this](const httplib::Request&, httplib::Response& res) {
        auto snap = control_.snapshot();
        snap["paused"] = control_.paused();
        snap["verification_pending"] = control_.verification_pending();
        snap["human_curriculum"] = curriculum_ && curriculum_->config().mode == curriculum::Proposer::human;
        snap["events"] = events_.size();
        reply(res, 200, snap);
    });

    s.Get("/api/events", [this](const httplib::Request& req, httplib::Response& res) {
        auto cursor = query_number(req, "cursor", 0);
        auto limit = std::clamp<std::size_t>(query_number(req, "limit", 500), 1, 5000);
        auto batch = events_.since(cursor, limit);
        reply(res, 200, {{"events", batch}, {"next", cursor + batch.size()}});
    });

    s.Post("/api/critique", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body)
            return;
        if (!body->contains("success") || !(*body)["success"].is_boolean()) {
            reply(res, 400, {{"error", "'success' must be true or false"}});
            return;
        }
        verifier::VerificationResult v;
        v.success = (*body)["success"].get<bool>();
        v.critique = body->value("critique", "");
        v.raw_reasoning = "human critic";
        if (!control_.offer_critique(v)) {
            reply(res, 409, {{"error", "no verification is pending"}});
            return;
        }
        reply(res, 200, {{"accepted", true}});
    });

    s.Post("/api/task", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body)
            return;
        if (!curriculum_ || curriculum_->config().mode != curriculum::Proposer::human) {
            reply(res, 409, {{"error", "the curriculum is not in human mode"}});
            return;
        }
        auto description = std::string(util::trim(body->value("description", "")));
        if (description.empty()) {
            reply(res, 400, {{"error", "'description' must not be empty"}});
            return;
        }
        curriculum_->human_tasks().push(description);
        reply(res, 200, {{"queued", description}, {"pending", curriculum_->human_tasks().size()}});
    });

    s.Post("/api/control", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = body_json(req, res);
        if (!body)
            return;
        auto action = body->value("action", "");
        if (action == "pause")
            control_.pause();
        else if (action == "resume")
            control_.resume();
        else {
            reply(res, 400, {{"error", "action must be 'pause' or 'resume'"}});
            return;
        }
        reply(res, 200, {{"paused", control_.paused()}});
    });

    if (std::filesystem::is_directory(static_dir_))
        s.set_mount_point("/", static_dir_);
}

int Service::start(const std::string& host, int port)
{
    if (thread_.joinable())
        throw std::logic_error("service already started");
    port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (port_ < 0)
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void Service::stop()
{
    if (server_)
        server_->stop();
    if (thread_.joinable())
        thread_.join();
}

} // namespace voyager::harness

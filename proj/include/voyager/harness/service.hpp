// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/control.hpp"
#include "voyager/agent/events.hpp"
#include "voyager/curriculum/curriculum.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace voyager::harness {

/// JSON API over a running loop plus static files at "/".
///
///   GET  /api/state                      last round-boundary snapshot
///   GET  /api/events?cursor=N&limit=M    {"events": [...], "next": N'}
///   POST /api/critique {"success", "critique"}   409 unless a verdict is awaited
///   POST /api/task {"description"}               409 unless the curriculum is human
///   POST /api/control {"action": "pause"|"resume"}
class Service {
public:
    Service(agent::LoopControl& control, agent::EventLog& events, curriculum::Curriculum* curriculum,
            std::string static_dir = "");
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread. port 0 picks a free port. Returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    int port() const { return port_; }

private:
    void routes();

    agent::LoopControl& control_;
    agent::EventLog& events_;
    curriculum::Curriculum* curriculum_;
    std::string static_dir_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace voyager::harness

// SPDX-License-Identifier: Apache-2.0
#include "voyager/agent/events.hpp"

#include "voyager/util/text.hpp"

#include <fstream>
#include <stdexcept>

namespace voyager::agent {

EventLog::EventLog(const std::string& path) : path_(path) { util::write_file(path, ""); }

std::size_t EventLog::append(nlohmann::json event)
{
    std::lock_guard lock(mu_);
    auto seq = events_.size();
    event["seq"] = seq;
    if (path_) {
        std::ofstream out(*path_, std::ios::app | std::ios::binary);
        out << event.dump() << "\n";
        if (!out)
            throw std::runtime_error("cannot append to " + *path_);
    }
    events_.push_back(std::move(event));
    return seq;
}

std::vector<nlohmann::json> EventLog::since(std::size_t cursor, std::size_t limit) const
{
    std::lock_guard lock(mu_);
    std::vector<nlohmann::json> out;
    for (auto i = cursor; i < events_.size() && out.size() < limit; ++i)
        out.push_back(events_[i]);
    return out;
}

std::size_t EventLog::size() const
{
    std::lock_guard lock(mu_);
    return events_.size();
}

std::vector<nlohmann::json> EventLog::all() const
{
    std::lock_guard lock(mu_);
    return events_;
}

std::string EventLog::text() const
{
    std::lock_guard lock(mu_);
    std::string out;
    for (const auto& e : events_)
        out += e.dump() + "\n";
    return out;
}

std::vector<nlohmann::json> EventLog::read_file(const std::string& path)
{
    std::vector<nlohmann::json> out;
    int line_no = 0;
    for (const auto& line : util::split_lines(util::read_file(path))) {
        ++line_no;
        if (util::trim(line).empty())
            continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed event: " + e.what());
        }
    }
    return out;
}

} // namespace voyager::agent

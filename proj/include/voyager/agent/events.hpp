// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace voyager::agent {

/// Append-only run event stream. One writer, any number of cursor readers.
class EventLog {
public:
    EventLog() = default;
    /// Also appends each event as a line to `path` (truncated first).
    explicit EventLog(const std::string& path);

    /// Adds "seq" and returns it.
    std::size_t append(nlohmann::json event);

    /// Events with seq >= cursor, at most `limit`.
    std::vector<nlohmann::json> since(std::size_t cursor, std::size_t limit = 1000) const;
    std::size_t size() const;
    std::vector<nlohmann::json> all() const;
    /// Every event as one compact JSON line, in order.
    std::string text() const;

    static std::vector<nlohmann::json> read_file(const std::string& path);

private:
    mutable std::mutex mu_;
    std::vector<nlohmann::json> events_;
    std::optional<std::string> path_;
};

} // namespace voyager::agent

// SPDX-License-Identifier: Apache-2.0
#include "voyager/llm/gateway.hpp"

#include <httplib.h>

#include <cstdlib>

namespace voyager::llm {

Transport http_transport(const LiveConfig& config)
{
    // base_url = scheme://host[:port][/prefix]
    auto url = config.base_url;
    auto scheme_end = url.find("://");
    auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    auto origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    auto prefix = path_start == std::string::npos ? std::string() : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();

    return [origin, prefix, key_env = config.api_key_env, timeout = config.timeout](const std::string& path,
                                                                                   const std::string& body) {
        httplib::Client client(origin);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(timeout);
        httplib::Headers headers;
        if (const char* key = std::getenv(key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
        auto res = client.Post(prefix + path, headers, body, "application/json");
        if (!res)
            return HttpReply{0, httplib::to_string(res.error())};
        return HttpReply{res->status, res->body};
    };
}

} // namespace voyager::llm

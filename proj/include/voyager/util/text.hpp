// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace voyager::util {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep, bool skip_empty = false);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);
std::string replace_all(std::string s, std::string_view from, std::string_view to);
bool iequals(std::string_view a, std::string_view b);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Rough token estimate used for accounting and prompt budgets (4 chars/token).
std::size_t estimate_tokens(std::string_view text);

} // namespace voyager::util

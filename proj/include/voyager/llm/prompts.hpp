// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>

namespace voyager::llm {

/// Text of data/prompts/<name>.txt.
std::string prompt_template(std::string_view name);

/// Replaces each {{key}} with its value. Unknown placeholders are left as they are.
std::string fill(std::string text, const std::map<std::string, std::string>& values);

} // namespace voyager::llm

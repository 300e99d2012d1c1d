// SPDX-License-Identifier: Apache-2.0
#include "voyager/llm/prompts.hpp"

#include "voyager/craftworld/registry.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

namespace voyager::llm {

std::string prompt_template(std::string_view name)
{
    return util::read_file(craftworld::data_path(fmt::format("prompts/{}.txt", name)));
}

std::string fill(std::string text, const std::map<std::string, std::string>& values)
{
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        auto open = text.find("{{", i);
        auto close = open == std::string::npos ? open : text.find("}}", open + 2);
        if (close == std::string::npos) {
            out.append(text, i);
            break;
        }
        out.append(text, i, open - i);
        auto it = values.find(text.substr(open + 2, close - open - 2));
        if (it == values.end())
            out.append(text, open, close + 2 - open);
        else
            out += it->second;
        i = close + 2;
    }
    return out;
}

} // namespace voyager::llm

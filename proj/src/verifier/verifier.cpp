// SPDX-License-Identifier: Apache-2.0
#include "voyager/verifier/verifier.hpp"

#include "voyager/llm/prompts.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace voyager::verifier {

namespace {

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from = 0)
{
    auto lower = util::to_lower(hay);
    return lower.find(util::to_lower(needle), from);
}

} // namespace

std::optional<VerificationResult> parse_verdict(std::string_view text)
{
    auto s = ifind(text, "success:");
    if (s == std::string_view::npos)
        return std::nullopt;
    auto rest = util::to_lower(util::trim(text.substr(s + 8)));
    VerificationResult r;
    if (rest.rfind("true", 0) == 0 || rest.rfind("yes", 0) == 0)
        r.success = true;
    else if (rest.rfind("false", 0) == 0 || rest.rfind("no", 0) == 0)
        r.success = false;
    else
        return std::nullopt;

    auto rs = ifind(text, "reasoning:");
    if (rs != std::string_view::npos && rs < s)
        r.raw_reasoning = std::string(util::trim(text.substr(rs + 10, s - rs - 10)));
    else
        r.raw_reasoning = std::string(util::trim(text.substr(0, s)));

    if (!r.success) {
        auto c = ifind(text, "critique:", s);
        if (c != std::string_view::npos)
            r.critique = std::string(util::trim(text.substr(c + 9)));
        if (r.critique.empty())
            r.critique = "The task is not complete yet.";
    }
    return r;
}

agent::StateView verifier_view(const craftworld::AgentState& state)
{
    auto v = agent::full_view(state);
    v.recently_seen_blocks.reset();
    v.nearby_entities.reset();
    return v;
}

std::string verifier_user_prompt(const craftworld::AgentState& state, std::string_view task, std::string_view context)
{
    return llm::fill(llm::prompt_template("verifier_user"),
                     {{"state", agent::render(verifier_view(state))},
                      {"task", std::string(task)},
                      {"context", context.empty() ? std::string("None") : std::string(context)}});
}

VerificationResult self_verify(const craftworld::AgentState& state, std::string_view task, std::string_view context,
                               llm::Gateway& gateway)
{
    auto system = llm::prompt_template("verifier_system");
    auto user = verifier_user_prompt(state, task, context);
    auto first = gateway.chat(llm::make_request(llm::Role::verifier, system, user));
    if (auto v = parse_verdict(first.text))
        return *v;
    auto second = gateway.chat(
        llm::make_request(llm::Role::verifier, system, user + "\n" + llm::prompt_template("verifier_reprompt")));
    if (auto v = parse_verdict(second.text))
        return *v;
    VerificationResult r;
    r.success = false;
    r.critique = "verifier unparseable";
    r.raw_reasoning = second.text;
    r.parsed = false;
    return r;
}

// ---- rule check ----

namespace {

std::set<std::string> expand(const std::string& name, const craftworld::Registry& reg)
{
    if (!reg.tag_members(name).empty()) {
        const auto& m = reg.tag_members(name);
        return {m.begin(), m.end()};
    }
    return {name};
}

std::optional<std::string> known_name(const std::vector<std::string>& words, const craftworld::Registry& reg)
{
    static const std::map<std::string, std::string> synonyms = {
        {"wood", "logs"},         {"wood_log", "logs"},   {"log", "logs"},   {"wooden_log", "logs"},
        {"plank", "planks"},      {"wooden_plank", "planks"}, {"wood_plank", "planks"},
        {"iron", "raw_iron"},     {"coal_ore", "coal_ore"},
    };
    auto joined = util::join(words, "_");
    std::vector<std::string> forms = {joined};
    if (joined.size() > 1 && joined.back() == 's')
        forms.push_back(joined.substr(0, joined.size() - 1));
    if (joined.size() > 2 && joined.compare(joined.size() - 2, 2, "es") == 0)
        forms.push_back(joined.substr(0, joined.size() - 2));
    auto items = reg.all_items();
    for (const auto& f : forms) {
        if (auto it = synonyms.find(f); it != synonyms.end())
            return it->second;
        if (!reg.tag_members(f).empty() || items.count(f) || reg.block(f) || reg.mob(f))
            return f;
    }
    auto spaced = util::join(words, " ");
    for (const auto& item : items)
        if (reg.plural_name(item) == spaced || reg.display_name(item) == spaced)
            return item;
    return std::nullopt;
}

} // namespace

std::optional<TaskGoal> parse_task(std::string_view task, const craftworld::Registry& reg)
{
    auto words = util::split_ws(util::to_lower(task));
    if (words.size() < 2)
        return std::nullopt;
    while (!words.empty() && (words.back().back() == '.' || words.back().back() == '!'))
        words.back().pop_back();
    static const std::map<std::string, Verb> verbs = {{"mine", Verb::mine},     {"craft", Verb::craft},
                                                      {"smelt", Verb::smelt},   {"obtain", Verb::obtain},
                                                      {"collect", Verb::obtain}, {"get", Verb::obtain},
                                                      {"kill", Verb::kill}};
    auto v = verbs.find(words[0]);
    if (v == verbs.end())
        return std::nullopt;
    TaskGoal g;
    g.verb = v->second;
    std::size_t at = 1;
    if (words[1] == "a" || words[1] == "an") {
        at = 2;
    } else if (std::all_of(words[1].begin(), words[1].end(), [](char c) { return c >= '0' && c <= '9'; })) {
        g.count = std::stoi(words[1]);
        at = 2;
    }
    std::vector<std::string> rest(words.begin() + static_cast<long>(at), words.end());
    if (rest.empty())
        return std::nullopt;
    g.phrase = util::join(rest, " ");
    auto name = known_name(rest, reg);
    if (!name)
        return std::nullopt;

    auto as_drop = [&](const std::string& n) {
        if (const auto* b = reg.block(n); b && !b->drop.empty())
            return b->drop;
        return n;
    };
    switch (g.verb) {
    case Verb::mine: g.items = expand(as_drop(*name), reg); break;
    case Verb::craft:
    case Verb::obtain: g.items = expand(*name, reg); break;
    case Verb::smelt: {
        auto input = as_drop(*name);
        for (const auto& in : expand(input, reg))
            if (const auto* r = reg.smelting(in))
                g.items.insert(r->output);
        if (g.items.empty())
            g.items = expand(*name, reg);
        break;
    }
    case Verb::kill: {
        const auto* mob = reg.mob(*name);
        if (!mob)
            return std::nullopt;
        for (const auto& [item, n] : mob->drops)
            g.items.insert(item);
        g.count = 1;
        break;
    }
    }
    return g;
}

std::optional<bool> rule_check(const craftworld::AgentState& before, const craftworld::AgentState& after,
                               std::string_view task, const craftworld::Registry& registry)
{
    auto goal = parse_task(task, registry);
    if (!goal)
        return std::nullopt;
    auto count = [](const craftworld::Inventory& inv, const std::string& item) {
        auto it = inv.find(item);
        return it == inv.end() ? 0 : it->second;
    };
    long long delta = 0;
    for (const auto& item : goal->items)
        delta += count(after.inventory, item) - count(before.inventory, item);
    return delta >= goal->count;
}

} // namespace voyager::verifier

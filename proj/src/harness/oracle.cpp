// SPDX-License-Identifier: Apache-2.0
#include "voyager/harness/oracle.hpp"

#include "voyager/curriculum/curriculum.hpp"
#include "voyager/skillscript/parser.hpp"
#include "voyager/util/text.hpp"
#include "voyager/verifier/verifier.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <regex>

namespace voyager::harness {

namespace fs = std::filesystem;

namespace {

std::vector<std::pair<std::string, std::string>> read_arrows(const std::string& path)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& line : util::split_lines(util::read_file(path))) {
        auto t = util::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        auto at = t.find("=>");
        if (at == std::string_view::npos)
            throw std::runtime_error(fmt::format("{}: expected 'a => b' in '{}'", path, t));
        out.emplace_back(std::string(util::trim(t.substr(0, at))), std::string(util::trim(t.substr(at + 2))));
    }
    return out;
}

craftworld::Inventory parse_inventory_line(const std::string& prompt)
{
    craftworld::Inventory inv;
    for (const auto& line : util::split_lines(prompt)) {
        if (line.rfind("Inventory", 0) != 0)
            continue;
        static const std::regex entry("'([^']+)': (\\d+)");
        for (std::sregex_iterator it(line.begin(), line.end(), entry), end; it != end; ++it)
            inv[(*it)[1].str()] = std::stoi((*it)[2].str());
    }
    return inv;
}

std::string fenced(const std::string& source)
{
    return fmt::format("```\n{}\n```", util::trim(source));
}

} // namespace

std::string prompt_field(const std::string& prompt, std::string_view label)
{
    std::string found;
    auto prefix = std::string(label) + ":";
    for (const auto& line : util::split_lines(prompt))
        if (line.rfind(prefix, 0) == 0)
            found = std::string(util::trim(std::string_view(line).substr(prefix.size())));
    return found;
}

OracleOptions OracleOptions::standard(OracleStrength strength)
{
    OracleOptions o;
    o.strength = strength;
    o.corpus_dir = craftworld::data_path("corpus");
    for (const auto& [task, skill] : read_arrows(craftworld::data_path("oracle/skills.txt")))
        o.task_skills[curriculum::task_id(task)] = skill;
    for (const auto& [goal, subgoals] : read_arrows(craftworld::data_path("oracle/decompose.txt"))) {
        auto& list = o.decompositions[curriculum::task_id(goal)];
        for (const auto& s : util::split(subgoals, ';'))
            if (!util::trim(s).empty())
                list.emplace_back(util::trim(s));
    }
    o.curriculum = curriculum::manual_tasks();
    for (const auto& [task, skill] : read_arrows(craftworld::data_path("oracle/skills.txt"))) {
        bool known = false;
        for (const auto& t : o.curriculum)
            known = known || curriculum::task_id(t) == curriculum::task_id(task);
        if (!known)
            o.curriculum.push_back(task);
    }
    o.pool = curriculum::random_pool();
    o.registry = craftworld::default_registry();
    return o;
}

std::shared_ptr<llm::ScriptedProvider> make_oracle(OracleOptions options)
{
    if (options.corpus_dir.empty())
        options.corpus_dir = craftworld::data_path("corpus");
    if (!options.registry)
        options.registry = craftworld::default_registry();
    auto opts = std::make_shared<const OracleOptions>(std::move(options));
    auto provider = std::make_shared<llm::ScriptedProvider>();
    using llm::Role;

    provider->on(Role::codegen, [opts](const llm::ChatRequest& r) {
        auto task = prompt_field(r.user_prompt, "Task");
        auto it = opts->task_skills.find(curriculum::task_id(task));
        if (it == opts->task_skills.end())
            return fmt::format("Explain: I do not know this task.\nPlan:\n1) Say so.\nCode:\n{}",
                               fenced(fmt::format("fn attemptTask() {{\n    chat(\"I do not know how to {}.\");\n}}",
                                                  util::to_lower(task))));
        const auto& skill = it->second;
        if (opts->strength == OracleStrength::weak)
            return fmt::format("Explain: Reuse the skill.\nPlan:\n1) Call {}.\nCode:\n{}", skill,
                               fenced(fmt::format("fn solve{}() {{\n    {}();\n}}", skill, skill)));
        auto source = util::read_file((fs::path(opts->corpus_dir) / (skill + ".skill")).string());
        return fmt::format("Explain: None.\nPlan:\n1) Follow the known recipe.\nCode:\n{}", fenced(source));
    });

    provider->on(Role::verifier, [opts](const llm::ChatRequest& r) {
        auto task = prompt_field(r.user_prompt, "Task");
        auto inv = parse_inventory_line(r.user_prompt);
        auto goal = verifier::parse_task(task, *opts->registry);
        if (!goal)
            return std::string("Reasoning: The task cannot be judged from the inventory.\nSuccess: false\n"
                               "Critique: Choose a task that yields an item.");
        int have = 0;
        for (const auto& item : goal->items) {
            auto f = inv.find(item);
            if (f != inv.end())
                have += f->second;
        }
        if (have >= goal->count)
            return fmt::format("Reasoning: The inventory holds {} of {}.\nSuccess: true\nCritique:", have,
                               goal->phrase);
        return fmt::format("Reasoning: The inventory holds {} of {}.\nSuccess: false\nCritique: Get {} more {}.", have,
                           goal->phrase, goal->count - have, goal->phrase);
    });

    provider->on(Role::describe, [opts](const llm::ChatRequest& r) {
        std::string name = "skill";
        auto at = r.user_prompt.find("fn ");
        if (at != std::string::npos) {
            auto end = r.user_prompt.find('(', at);
            name = std::string(util::trim(r.user_prompt.substr(at + 3, end - at - 3)));
        }
        auto path = fs::path(opts->corpus_dir) / (name + ".desc.txt");
        if (fs::exists(path))
            return std::string(util::trim(util::read_file(path.string())));
        return fmt::format("The function {} completes one step of a task.", name);
    });

    provider->on(Role::curriculum, [opts](const llm::ChatRequest& r) {
        std::set<std::string> done;
        for (const auto& t : util::split(prompt_field(r.user_prompt, "Completed tasks so far"), ','))
            done.insert(curriculum::task_id(util::trim(t)));
        for (const auto& t : util::split(prompt_field(r.user_prompt, "Failed tasks that are too hard"), ','))
            done.insert(curriculum::task_id(util::trim(t)));
        for (const auto& t : opts->curriculum)
            if (!done.count(curriculum::task_id(t)))
                return fmt::format("Reasoning: This is the next step toward better tools.\nTask: {}", t);
        for (const auto& item : opts->pool) {
            auto t = curriculum::obtain_task(item);
            if (!done.count(curriculum::task_id(t)))
                return fmt::format("Reasoning: A new item widens what the agent can do.\nTask: {}", t);
        }
        return std::string("Reasoning: Everything known is done.\nTask: Mine 3 wood log");
    });

    provider->on(Role::decompose, [opts](const llm::ChatRequest& r) {
        auto goal = prompt_field(r.user_prompt, "Goal");
        auto it = opts->decompositions.find(curriculum::task_id(goal));
        std::vector<std::string> steps = it == opts->decompositions.end() ? std::vector<std::string>{goal} : it->second;
        std::string out;
        for (std::size_t i = 0; i < steps.size(); ++i)
            out += fmt::format("{}. {}\n", i + 1, steps[i]);
        return out;
    });

    provider->on(Role::qa_ask, [](const llm::ChatRequest&) {
        return std::string("Question 1: What are the blocks that I can find nearby?\nConcept 1: blocks");
    });
    provider->on(Role::qa_answer, [](const llm::ChatRequest&) {
        return std::string("Gather the raw materials first, then craft or smelt the target near a station.");
    });
    return provider;
}

} // namespace voyager::harness

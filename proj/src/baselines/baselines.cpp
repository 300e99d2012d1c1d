// SPDX-License-Identifier: Apache-2.0
#include "voyager/baselines/baselines.hpp"

#include "voyager/llm/prompts.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <cctype>

namespace voyager::baselines {

std::string_view to_string(Driver d)
{
    switch (d) {
    case Driver::voyager: return "voyager";
    case Driver::react: return "react";
    case Driver::reflexion: return "reflexion";
    case Driver::autogpt: return "autogpt";
    }
    return "?";
}

std::optional<Driver> parse_driver(std::string_view name)
{
    for (auto d : {Driver::voyager, Driver::react, Driver::reflexion, Driver::autogpt})
        if (util::iequals(name, to_string(d)))
            return d;
    return std::nullopt;
}

agent::LoopConfig loop_config(Driver driver, const BaselineConfig& config)
{
    agent::LoopConfig c;
    c.driver = std::string(to_string(driver));
    c.max_iterations = config.max_iterations;
    c.max_rounds = config.rounds_per_cycle;
    c.exec = config.exec;
    c.run_dir = config.run_dir;
    c.task_context = false;
    auto& a = c.ablation;
    switch (driver) {
    case Driver::voyager:
        c.task_context = true;
        break;
    case Driver::react:
        a.include_execution_errors = false;
        a.use_self_verification = false;
        a.use_skill_library = false;
        break;
    case Driver::reflexion:
        a.use_skill_library = false;
        break;
    case Driver::autogpt:
        a.use_self_verification = false;
        a.use_skill_library = config.attach_skill_library;
        break;
    }
    return c;
}

namespace {

BaselineSummary run_cycles(agent::Agent& agent, const BaselineConfig& config)
{
    BaselineSummary summary;
    auto task = curriculum::make_task(config.goal, curriculum::Proposer::manual);
    agent.events().append({{"type", "start"}, {"driver", agent.config().driver}, {"task", config.goal}});
    while (agent.budget_left()) {
        std::vector<agent::RoundRecord> rounds;
        for (int r = 1; r <= config.rounds_per_cycle && agent.budget_left(); ++r)
            rounds.push_back(agent.run_round(task, "", rounds.empty() ? nullptr : &rounds.back(), r));
        ++summary.cycles;
        agent.events().append({{"type", "cycle"},
                               {"driver", agent.config().driver},
                               {"cycle", summary.cycles},
                               {"rounds", rounds.size()},
                               {"iteration", agent.iterations()}});
        if (config.done && config.done()) {
            summary.goal_reached = true;
            break;
        }
    }
    summary.iterations = agent.iterations();
    agent.events().append({{"type", "end"}, {"driver", agent.config().driver}, {"iterations", summary.iterations}});
    return summary;
}

} // namespace

BaselineSummary run_react(agent::Agent& agent, const BaselineConfig& config)
{
    return run_cycles(agent, config);
}

BaselineSummary run_reflexion(agent::Agent& agent, const BaselineConfig& config)
{
    return run_cycles(agent, config);
}

std::vector<std::string> parse_subgoals(std::string_view text)
{
    std::vector<std::string> out;
    for (const auto& raw : util::split_lines(text)) {
        auto line = util::trim(raw);
        std::size_t i = 0;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')'))
            line = util::trim(line.substr(i + 1));
        else if (!line.empty() && (line[0] == '-' || line[0] == '*'))
            line = util::trim(line.substr(1));
        else
            continue;
        if (!line.empty())
            out.emplace_back(line);
    }
    return out;
}

std::vector<std::string> decompose(std::string_view goal, const craftworld::AgentState& state, llm::Gateway& gateway)
{
    auto request = llm::make_request(
        llm::Role::decompose, llm::prompt_template("decompose_system"),
        llm::fill(llm::prompt_template("decompose_user"),
                  {{"state", agent::render(agent::full_view(state))}, {"goal", std::string(goal)}}));
    auto subgoals = parse_subgoals(gateway.chat(request).text);
    if (subgoals.empty())
        subgoals.emplace_back(goal);
    return subgoals;
}

BaselineSummary run_autogpt(agent::Agent& agent, llm::Gateway& gateway, craftworld::World& world,
                            const BaselineConfig& config)
{
    BaselineSummary summary;
    const auto& driver = agent.config().driver;
    agent.events().append({{"type", "start"}, {"driver", driver}, {"task", config.goal}});
    SubgoalPlan plan;
    bool first_plan = true;
    while (agent.budget_left()) {
        if (plan.cursor >= plan.subgoals.size()) {
            plan.subgoals = decompose(config.goal, world.observe(), gateway);
            plan.cursor = 0;
            plan.consecutive_no_new_item = 0;
            if (!first_plan)
                ++summary.replans;
            first_plan = false;
            agent.events().append(
                {{"type", "plan"}, {"driver", driver}, {"subgoals", plan.subgoals}, {"iteration", agent.iterations()}});
        }
        auto subgoal = plan.subgoals[plan.cursor++];
        summary.subgoals.push_back(subgoal);
        auto task = curriculum::make_task(subgoal, curriculum::Proposer::automatic);
        auto held_before = world.ever_held().size();
        std::vector<agent::RoundRecord> rounds;
        bool completed = false;
        for (int r = 1; r <= config.rounds_per_cycle && agent.budget_left(); ++r) {
            rounds.push_back(agent.run_round(task, "", rounds.empty() ? nullptr : &rounds.back(), r));
            if (!rounds.back().outcome.error) {
                completed = true;
                break;
            }
        }
        bool gained = world.ever_held().size() > held_before;
        plan.consecutive_no_new_item = gained ? 0 : plan.consecutive_no_new_item + 1;
        agent.events().append({{"type", "subgoal"},
                               {"driver", driver},
                               {"subgoal", subgoal},
                               {"completed", completed},
                               {"rounds", rounds.size()},
                               {"new_item", gained},
                               {"no_new_item_streak", plan.consecutive_no_new_item},
                               {"iteration", agent.iterations()}});
        if (config.done && config.done()) {
            summary.goal_reached = true;
            break;
        }
        if (plan.consecutive_no_new_item >= config.no_new_item_limit) {
            agent.events().append({{"type", "replan"}, {"driver", driver}, {"iteration", agent.iterations()}});
            plan.cursor = plan.subgoals.size();
        }
    }
    summary.iterations = agent.iterations();
    agent.events().append({{"type", "end"}, {"driver", driver}, {"iterations", summary.iterations}});
    return summary;
}

} // namespace voyager::baselines

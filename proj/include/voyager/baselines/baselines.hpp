// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/loop.hpp"

#include <functional>
#include <string>
#include <vector>

namespace voyager::baselines {

inline constexpr std::string_view explore_task = "explore the world and get as many items as possible";

enum class Driver { voyager, react, reflexion, autogpt };
std::string_view to_string(Driver d);
std::optional<Driver> parse_driver(std::string_view name);

struct BaselineConfig {
    int max_iterations = 160;
    int rounds_per_cycle = 4; // one from scratch, then refinements
    int no_new_item_limit = 3;
    bool attach_skill_library = false;
    std::string goal{explore_task};
    skillscript::ExecOptions exec;
    std::string run_dir;
    /// Checked after every cycle or subgoal; true ends the run.
    std::function<bool()> done;
};

/// Loop configuration the driver hands to the shared round machinery.
agent::LoopConfig loop_config(Driver driver, const BaselineConfig& config);

struct BaselineSummary {
    int iterations = 0;
    int cycles = 0;
    int replans = 0; // decompositions after the first
    std::vector<std::string> subgoals;
    bool goal_reached = false;
};

/// Cycles of one round from scratch and three refinements with chat log and state.
BaselineSummary run_react(agent::Agent& agent, const BaselineConfig& config);

/// ReAct cycles plus execution errors and verifier critiques between rounds.
BaselineSummary run_reflexion(agent::Agent& agent, const BaselineConfig& config);

struct SubgoalPlan {
    std::vector<std::string> subgoals;
    std::size_t cursor = 0;
    int consecutive_no_new_item = 0;
};

/// Numbered or bulleted lines; blank and unnumbered lines are ignored.
std::vector<std::string> parse_subgoals(std::string_view text);

std::vector<std::string> decompose(std::string_view goal, const craftworld::AgentState& state, llm::Gateway& gateway);

/// Decompose, attempt each subgoal until a round runs without an execution error (at most
/// rounds_per_cycle rounds), replan after no_new_item_limit subgoals in a row gain nothing.
BaselineSummary run_autogpt(agent::Agent& agent, llm::Gateway& gateway, craftworld::World& world,
                            const BaselineConfig& config);

} // namespace voyager::baselines

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/state_view.hpp"
#include "voyager/craftworld/registry.hpp"
#include "voyager/craftworld/types.hpp"
#include "voyager/llm/gateway.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace voyager::verifier {

struct VerificationResult {
    bool success = false;
    std::string critique; // empty iff success
    std::string raw_reasoning;
    bool parsed = true;
};

/// Reads "Reasoning:", "Success: true|false" and "Critique:" in any layout.
std::optional<VerificationResult> parse_verdict(std::string_view text);

/// Full state minus recently seen blocks and nearby entities.
agent::StateView verifier_view(const craftworld::AgentState& state);

std::string verifier_user_prompt(const craftworld::AgentState& state, std::string_view task, std::string_view context);

/// One call at temperature 0, one reprompt, then a failure with critique "verifier unparseable".
VerificationResult self_verify(const craftworld::AgentState& state, std::string_view task, std::string_view context,
                               llm::Gateway& gateway);

enum class Verb { mine, craft, smelt, obtain, kill };

struct TaskGoal {
    Verb verb = Verb::obtain;
    int count = 1;
    std::string phrase;           // as written, e.g. "wood log"
    std::set<std::string> items;  // inventory items that count toward the goal
};

/// "Mine 3 wood log" -> {mine, 3, {oak_log, birch_log, ...}}. nullopt for free-form tasks.
std::optional<TaskGoal> parse_task(std::string_view task, const craftworld::Registry& registry);

/// Ground truth by inventory delta. nullopt when the task is not rule-checkable.
std::optional<bool> rule_check(const craftworld::AgentState& before, const craftworld::AgentState& after,
                               std::string_view task, const craftworld::Registry& registry);

} // namespace voyager::verifier

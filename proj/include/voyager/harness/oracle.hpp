// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/registry.hpp"
#include "voyager/llm/gateway.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace voyager::harness {

/// Strong: answers a known task with the full corpus program.
/// Weak: answers with a one-line program that calls the corpus skill by name, so it only
/// works when the library already holds that skill.
enum class OracleStrength { strong, weak };

struct OracleOptions {
    OracleStrength strength = OracleStrength::strong;
    std::string corpus_dir;                            // empty: bundled corpus
    std::map<std::string, std::string> task_skills;    // task id -> skill name
    std::map<std::string, std::vector<std::string>> decompositions; // goal id -> subgoals
    std::vector<std::string> curriculum;               // proposed in order by the curriculum role
    std::vector<std::string> pool;                     // then "Obtain 1 <item>" for these
    std::shared_ptr<const craftworld::Registry> registry;

    /// Bundled tables, manual curriculum and default registry.
    static OracleOptions standard(OracleStrength strength = OracleStrength::strong);
};

/// Deterministic stand-in for every model role, driven only by the prompt text.
std::shared_ptr<llm::ScriptedProvider> make_oracle(OracleOptions options);

/// Task line of a prompt: text after the last line that starts with "Task:".
std::string prompt_field(const std::string& prompt, std::string_view label);

} // namespace voyager::harness

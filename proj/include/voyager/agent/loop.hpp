// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/control.hpp"
#include "voyager/agent/events.hpp"
#include "voyager/craftworld/world.hpp"
#include "voyager/curriculum/curriculum.hpp"
#include "voyager/llm/gateway.hpp"
#include "voyager/skills/library.hpp"
#include "voyager/skillscript/interpreter.hpp"
#include "voyager/verifier/verifier.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace voyager::agent {

struct AblationConfig {
    bool include_env_feedback = true;
    bool include_execution_errors = true;
    bool use_self_verification = true;
    bool use_skill_library = true;
};

/// Which optional blocks the code-generation user prompt carries.
struct PromptSections {
    bool last_code = true;
    bool chat_log = true;
    bool execution_error = true;
    bool critique = true;
};

PromptSections sections_for(const AblationConfig& ablation);

struct RoundRecord {
    int iteration_index = 0; // 1-based count of codegen calls so far
    int round = 1;           // within the episode
    std::string prompt_digest;
    std::string program_source; // empty when extraction failed
    skillscript::ExecutionOutcome outcome;
    verifier::VerificationResult verdict;
    std::optional<bool> rule_check;
};

enum class EpisodeFinal { success, abandoned, truncated, aborted };
std::string_view to_string(EpisodeFinal f);

struct EpisodeRecord {
    curriculum::Task task;
    std::vector<RoundRecord> rounds;
    EpisodeFinal final = EpisodeFinal::abandoned;
    std::optional<std::string> committed_skill;
    std::string abort_reason;
};

struct CodegenInputs {
    std::string task;
    std::string context;
    std::vector<const skills::Skill*> retrieved;
    const RoundRecord* last_round = nullptr;
    craftworld::AgentState state;
};

/// Round 1 has no last-round blocks; later rounds carry the enabled ones verbatim.
llm::ChatRequest assemble_codegen_prompt(const CodegenInputs& in, const PromptSections& sections, int budget);

struct Extraction {
    std::optional<std::string> source;
    std::string error;
};

/// Exactly one fenced block holding a function that parses.
Extraction extract_program(std::string_view response);

/// Chat-log text used as the feedback half of the retrieval query.
std::string feedback_text(const skillscript::ExecutionOutcome& outcome);

struct LoopConfig {
    AblationConfig ablation;
    int max_rounds = 4;
    int max_iterations = 160;
    int retrieval_k = 5;
    skillscript::ExecOptions exec;
    /// Ask the auxiliary model "How to <task>?" once per episode for the Context line.
    bool task_context = true;
    bool human_critic = false;
    std::string driver = "voyager";
    /// Empty: nothing written. Otherwise events.log, prompts/ and skills/ go here.
    std::string run_dir;
    int max_curriculum_failures = 5;
};

struct RunSummary {
    int iterations = 0;
    std::vector<EpisodeRecord> episodes;
    bool truncated = false;
    std::string stop_reason;
};

/// The lifelong learning loop: propose, generate, execute, verify, commit.
class Agent {
public:
    Agent(craftworld::World& world, llm::Gateway& gateway, skills::SkillLibrary& library,
          curriculum::Curriculum* curriculum, LoopConfig config, EventLog* events = nullptr,
          LoopControl* control = nullptr);

    RoundRecord run_round(const curriculum::Task& task, const std::string& context, const RoundRecord* last,
                          int round);
    EpisodeRecord run_episode(const curriculum::Task& task);
    RunSummary run_lifelong();

    int iterations() const { return iterations_; }
    bool budget_left() const { return iterations_ < config_.max_iterations; }
    const curriculum::Progress& progress() const { return progress_; }
    curriculum::Progress& progress() { return progress_; }
    const LoopConfig& config() const { return config_; }
    EventLog& events() { return *events_; }

    std::vector<std::string> prompts() const { return prompts_; }

private:
    std::string task_context(const curriculum::Task& task);
    verifier::VerificationResult verify(const curriculum::Task& task, const std::string& context);
    std::optional<std::string> commit(const curriculum::Task& task, const RoundRecord& round);
    void emit(nlohmann::json event);
    void publish(const curriculum::Task* task, int round);
    void save_prompt(const llm::ChatRequest& request);

    craftworld::World& world_;
    llm::Gateway& gateway_;
    skills::SkillLibrary& library_;
    curriculum::Curriculum* curriculum_;
    LoopConfig config_;
    EventLog own_events_;
    EventLog* events_;
    LoopControl own_control_;
    LoopControl* control_;
    curriculum::Progress progress_;
    int iterations_ = 0;
    std::set<std::string> seen_items_;
    std::vector<std::string> prompts_;
};

/// Event fields every driver attaches to a round: iteration, position, biome and the
/// item names held for the first time since the previous round.
nlohmann::json round_observation(const craftworld::World& world, std::set<std::string>& seen_items);

nlohmann::json state_json(const craftworld::AgentState& state);

} // namespace voyager::agent

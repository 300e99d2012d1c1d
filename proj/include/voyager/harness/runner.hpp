// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/loop.hpp"
#include "voyager/baselines/baselines.hpp"
#include "voyager/harness/metrics.hpp"
#include "voyager/harness/oracle.hpp"

#include <memory>
#include <string>
#include <vector>

namespace voyager::harness {

enum class LlmMode { live, scripted, replay };
std::string_view to_string(LlmMode m);
std::optional<LlmMode> parse_llm_mode(std::string_view text);

struct RunOptions {
    baselines::Driver driver = baselines::Driver::voyager;
    std::uint64_t seed = 1;
    int max_iterations = 160;
    LlmMode llm = LlmMode::scripted;
    OracleStrength oracle = OracleStrength::strong;
    std::string cassette;     // replay input
    std::string world_config; // empty: bundled config
    std::string run_dir;      // empty: nothing written
    std::string library_dir;  // optional starting library
    curriculum::Proposer curriculum = curriculum::Proposer::automatic;
    agent::AblationConfig ablation;
    bool human_critic = false;
    bool attach_skill_library = false;
    llm::LiveConfig live;
};

struct RunResult {
    int iterations = 0;
    Metrics metrics;
    std::size_t skills = 0;
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::string stop_reason;
};

/// Everything one run owns. Construct, optionally hand control()/events() to a service, run().
class Experiment {
public:
    explicit Experiment(RunOptions options, std::shared_ptr<llm::ChatProvider> provider = nullptr);
    ~Experiment();

    RunResult run();

    agent::LoopControl& control() { return control_; }
    agent::EventLog& events() { return *events_; }
    curriculum::Curriculum& curriculum() { return *curriculum_; }
    const curriculum::Curriculum& curriculum() const { return *curriculum_; }
    llm::Gateway& gateway() { return *gateway_; }
    craftworld::World& world() { return *world_; }
    skills::SkillLibrary& library() { return *library_; }
    agent::Agent& agent() { return *agent_; }
    const RunOptions& options() const { return options_; }

private:
    RunOptions options_;
    agent::LoopControl control_;
    std::unique_ptr<agent::EventLog> events_;
    std::unique_ptr<craftworld::World> world_;
    std::unique_ptr<llm::Gateway> gateway_;
    std::unique_ptr<skills::SkillLibrary> library_;
    std::unique_ptr<curriculum::Curriculum> curriculum_;
    std::unique_ptr<agent::Agent> agent_;
};

/// Provider for the chosen mode; the embedder matches it.
std::pair<std::shared_ptr<llm::ChatProvider>, std::shared_ptr<llm::Embedder>> make_backend(const RunOptions& options);

struct ZeroShotOptions {
    std::string library_dir; // empty: start with no skills
    std::vector<std::string> tasks;
    int max_iterations = 50;
    std::uint64_t seed = 1001;
    baselines::Driver driver = baselines::Driver::voyager;
    std::shared_ptr<llm::ChatProvider> provider;
    std::shared_ptr<llm::Embedder> embedder; // default: hash embedder
    std::string scratch_dir;                 // where learned skills go; empty: kept in memory
    agent::EventLog* events = nullptr;
};

struct ZeroShotResult {
    std::string task;
    bool success = false;
    int iterations = 0;
    bool inventory_empty_at_start = false;
    std::uint64_t seed = 0;
    std::size_t library_size = 0;

    /// Iterations used, or "N/A" when the cap was reached first.
    std::string cell() const;
};

/// Fresh world per task with an empty inventory; the library directory is only read.
std::vector<ZeroShotResult> run_zero_shot(const ZeroShotOptions& options);

} // namespace voyager::harness

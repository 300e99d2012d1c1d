// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/agent/state_view.hpp"
#include "voyager/craftworld/types.hpp"
#include "voyager/llm/gateway.hpp"
#include "voyager/util/channel.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace voyager::curriculum {

enum class Proposer { automatic, manual, random, human };
std::string_view to_string(Proposer p);
std::optional<Proposer> parse_proposer(std::string_view text);

struct Task {
    std::string id; // normalized description; equal ids are the same task
    std::string description;
    Proposer proposer = Proposer::automatic;
    int attempts = 0;
    std::string reasoning;
};

Task make_task(std::string description, Proposer proposer);
std::string task_id(std::string_view description);

/// Completed and failed ledgers. A task id appears at most once across both.
struct Progress {
    std::vector<Task> completed;
    std::vector<Task> failed;

    void record_outcome(const Task& task, bool success);
    std::size_t num_completed() const { return completed.size(); }
    const Task* find_failed(std::string_view id) const;
};

enum class Field {
    core_inventory,
    equipment,
    nearby_blocks,
    position,
    nearby_entities,
    full_inventory,
    recently_seen_blocks,
    biome,
    health,
    hunger,
    time,
    additional_context,
};
std::string_view to_string(Field f);

struct WarmupSchedule {
    std::map<Field, int> thresholds;
    std::vector<std::string> core_items; // substring match on item names

    static WarmupSchedule standard();
    bool unlocked(Field f, std::size_t num_completed) const;
    /// Throws std::invalid_argument.
    void validate() const;
};

bool is_core_item(std::string_view item, const std::vector<std::string>& whitelist);

/// Chests follow the full inventory; they are not a row of their own in the schedule.
agent::StateView warmup_filter(const craftworld::AgentState& state, std::size_t num_completed,
                               const WarmupSchedule& schedule);

struct QaPair {
    std::string question;
    std::string topic;
    std::string answer;
};

/// Reference documents keyed by lower-cased topic. Optional.
class DocStore {
public:
    void add(std::string topic, std::string text);
    std::optional<std::string> find(std::string_view topic) const;
    bool empty() const { return docs_.empty(); }
    /// One document per *.txt file, topic = file stem with '_' as space.
    static DocStore load_dir(const std::string& dir);

private:
    std::map<std::string, std::string, std::less<>> docs_;
};

std::vector<std::pair<std::string, std::string>> parse_questions(std::string_view text);

/// Self-ask then self-answer. Gateway failures yield an empty list and a warning.
std::vector<QaPair> gather_context(const agent::StateView& view, const Progress& progress, llm::Gateway& gateway,
                                   const DocStore* docs, int count, std::vector<std::string>* warnings = nullptr);

std::string render_context(const std::vector<QaPair>& pairs);

class CurriculumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text after the last line starting with "Task:", trimmed; nullopt when absent or empty.
std::optional<std::string> parse_task_line(std::string_view response);

std::string curriculum_user_prompt(const agent::StateView& view, const Progress& progress,
                                   const std::vector<QaPair>& context);

/// One gateway call at temperature 0.1, one reprompt on a missing Task line, then CurriculumError.
Task propose_next_task(const agent::StateView& view, const Progress& progress, const std::vector<QaPair>& context,
                       llm::Gateway& gateway);

/// Shrinks the prompt inputs until system + user fit in `budget_tokens`: the oldest completed
/// tasks go first, then the recently seen blocks. Returns how many completed entries were dropped.
std::size_t fit_to_budget(agent::StateView& view, Progress& progress, const std::vector<QaPair>& context,
                          std::size_t budget_tokens);

std::vector<std::string> load_task_list(const std::string& path);
std::vector<std::string> manual_tasks();
std::vector<std::string> random_pool();

std::string obtain_task(std::string_view item);

/// Uniform draw from the pool, reproducible from the seed.
class RandomCurriculum {
public:
    RandomCurriculum(std::vector<std::string> pool, std::uint64_t seed);
    Task next();

private:
    std::vector<std::string> pool_;
    std::mt19937_64 rng_;
};

struct CurriculumConfig {
    Proposer mode = Proposer::automatic;
    WarmupSchedule schedule = WarmupSchedule::standard();
    int qa_count = 5;
    std::size_t context_budget_tokens = 6000; // 0: unlimited
    std::uint64_t seed = 0;
    std::vector<std::string> manual = manual_tasks();
    std::vector<std::string> pool = random_pool();
};

/// Dispatches to the configured proposer. next() returns nullopt when the manual list is
/// exhausted or the human queue is closed.
class Curriculum {
public:
    Curriculum(CurriculumConfig config, llm::Gateway* gateway, const DocStore* docs = nullptr);

    std::optional<Task> next(const craftworld::AgentState& state, const Progress& progress);

    util::Channel<std::string>& human_tasks() { return human_; }
    const CurriculumConfig& config() const { return config_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::vector<QaPair>& last_context() const { return last_context_; }

private:
    CurriculumConfig config_;
    llm::Gateway* gateway_;
    const DocStore* docs_;
    RandomCurriculum random_;
    util::Channel<std::string> human_;
    std::vector<std::string> warnings_;
    std::vector<QaPair> last_context_;
};

} // namespace voyager::curriculum

// SPDX-License-Identifier: Apache-2.0
#include "voyager/harness/runner.hpp"

#include "voyager/craftworld/world_config.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <filesystem>

namespace voyager::harness {

namespace fs = std::filesystem;

std::string_view to_string(LlmMode m)
{
    switch (m) {
    case LlmMode::live: return "live";
    case LlmMode::scripted: return "scripted";
    case LlmMode::replay: return "replay";
    }
    return "?";
}

std::optional<LlmMode> parse_llm_mode(std::string_view text)
{
    for (auto m : {LlmMode::live, LlmMode::scripted, LlmMode::replay})
        if (util::iequals(text, to_string(m)))
            return m;
    return std::nullopt;
}

std::pair<std::shared_ptr<llm::ChatProvider>, std::shared_ptr<llm::Embedder>> make_backend(const RunOptions& o)
{
    switch (o.llm) {
    case LlmMode::live: {
        auto provider = std::make_shared<llm::LiveProvider>(o.live);
        return {provider, std::make_shared<llm::LiveEmbedder>(provider)};
    }
    case LlmMode::replay:
        if (o.cassette.empty())
            throw std::invalid_argument("replay mode needs a cassette");
        return {std::make_shared<llm::ReplayProvider>(llm::Cassette::load(o.cassette)),
                std::make_shared<llm::HashEmbedder>()};
    case LlmMode::scripted:
        break;
    }
    return {make_oracle(OracleOptions::standard(o.oracle)), std::make_shared<llm::HashEmbedder>()};
}

Experiment::Experiment(RunOptions options, std::shared_ptr<llm::ChatProvider> provider)
    : options_(std::move(options))
{
    auto [default_provider, embedder] = make_backend(options_);
    if (!provider)
        provider = default_provider;

    if (!options_.run_dir.empty()) {
        fs::create_directories(options_.run_dir);
        events_ = std::make_unique<agent::EventLog>((fs::path(options_.run_dir) / "events.log").string());
    } else {
        events_ = std::make_unique<agent::EventLog>();
    }

    auto registry = craftworld::default_registry();
    auto config = options_.world_config.empty() ? craftworld::default_world_config(options_.seed)
                                                : craftworld::WorldConfig::load(options_.world_config, registry);
    config.seed = options_.seed;
    world_ = std::make_unique<craftworld::World>(craftworld::World::create(config));

    gateway_ = std::make_unique<llm::Gateway>(provider, embedder);
    if (!options_.run_dir.empty() && options_.llm != LlmMode::replay)
        gateway_->record_to((fs::path(options_.run_dir) / "cassette.jsonl").string());

    if (options_.library_dir.empty())
        library_ = std::make_unique<skills::SkillLibrary>(embedder);
    else
        library_ = std::make_unique<skills::SkillLibrary>(skills::SkillLibrary::load(options_.library_dir, embedder));

    curriculum::CurriculumConfig cc;
    cc.mode = options_.curriculum;
    cc.seed = options_.seed;
    curriculum_ = std::make_unique<curriculum::Curriculum>(cc, gateway_.get());

    baselines::BaselineConfig bc;
    bc.max_iterations = options_.max_iterations;
    bc.attach_skill_library = options_.attach_skill_library;
    bc.run_dir = options_.run_dir;
    auto lc = baselines::loop_config(options_.driver, bc);
    if (options_.driver == baselines::Driver::voyager)
        lc.ablation = options_.ablation;
    lc.human_critic = options_.human_critic;
    agent_ = std::make_unique<agent::Agent>(*world_, *gateway_, *library_, curriculum_.get(), lc, events_.get(),
                                            &control_);
}

Experiment::~Experiment()
{
    control_.stop();
    curriculum_->human_tasks().close();
}

RunResult Experiment::run()
{
    RunResult result;
    baselines::BaselineConfig bc;
    bc.max_iterations = options_.max_iterations;
    bc.attach_skill_library = options_.attach_skill_library;
    switch (options_.driver) {
    case baselines::Driver::voyager:
        result.stop_reason = agent_->run_lifelong().stop_reason;
        break;
    case baselines::Driver::react:
        baselines::run_react(*agent_, bc);
        result.stop_reason = "iteration cap";
        break;
    case baselines::Driver::reflexion:
        baselines::run_reflexion(*agent_, bc);
        result.stop_reason = "iteration cap";
        break;
    case baselines::Driver::autogpt:
        baselines::run_autogpt(*agent_, *gateway_, *world_, bc);
        result.stop_reason = "iteration cap";
        break;
    }
    result.iterations = agent_->iterations();
    auto events = events_->all();
    result.metrics = compute_metrics(events);
    result.skills = library_->size();
    result.completed = agent_->progress().completed.size();
    result.failed = agent_->progress().failed.size();
    if (!options_.run_dir.empty()) {
        util::write_file((fs::path(options_.run_dir) / "metrics.csv").string(), metrics_csv(samples(events)));
        library_->persist((fs::path(options_.run_dir) / "skills").string());
    }
    return result;
}

std::string ZeroShotResult::cell() const
{
    return success ? std::to_string(iterations) : "N/A";
}

namespace {

bool goal_met(const craftworld::AgentState& start, const craftworld::World& world, const std::string& task)
{
    return verifier::rule_check(start, world.observe(), task, world.registry()).value_or(false);
}

} // namespace

std::vector<ZeroShotResult> run_zero_shot(const ZeroShotOptions& o)
{
    if (!o.provider)
        throw std::invalid_argument("zero-shot evaluation needs a chat provider");
    auto embedder = o.embedder ? o.embedder : std::make_shared<llm::HashEmbedder>();
    std::vector<ZeroShotResult> results;
    agent::EventLog own_events;
    auto* events = o.events ? o.events : &own_events;
    for (const auto& task : o.tasks) {
        ZeroShotResult r;
        r.task = task;
        r.seed = o.seed;
        auto world = craftworld::World::create(craftworld::default_world_config(o.seed));
        world.set_inventory({});
        auto start = world.observe();
        r.inventory_empty_at_start = start.inventory.empty();

        auto library = o.library_dir.empty() ? skills::SkillLibrary(embedder)
                                             : skills::SkillLibrary::load(o.library_dir, embedder);
        r.library_size = library.size();
        llm::Gateway gateway(o.provider, embedder);

        baselines::BaselineConfig bc;
        bc.max_iterations = o.max_iterations;
        bc.goal = task;
        bc.attach_skill_library = !o.library_dir.empty();
        bc.done = [&] { return goal_met(start, world, task); };
        auto lc = baselines::loop_config(o.driver, bc);
        agent::Agent agent(world, gateway, library, nullptr, lc, events);
        events->append({{"type", "zero_shot_task"}, {"driver", lc.driver}, {"task", task}, {"seed", o.seed},
                        {"library_size", library.size()}});

        switch (o.driver) {
        case baselines::Driver::voyager:
            while (agent.budget_left() && !goal_met(start, world, task)) {
                auto plan = baselines::decompose(task, world.observe(), gateway);
                events->append({{"type", "plan"}, {"driver", lc.driver}, {"subgoals", plan},
                                {"iteration", agent.iterations()}});
                bool progressed = false;
                for (const auto& subgoal : plan) {
                    if (!agent.budget_left() || goal_met(start, world, task))
                        break;
                    auto used = agent.iterations();
                    agent.run_episode(curriculum::make_task(subgoal, curriculum::Proposer::automatic));
                    progressed = progressed || agent.iterations() > used;
                }
                if (!progressed)
                    break;
            }
            break;
        case baselines::Driver::react:
            baselines::run_react(agent, bc);
            break;
        case baselines::Driver::reflexion:
            baselines::run_reflexion(agent, bc);
            break;
        case baselines::Driver::autogpt:
            baselines::run_autogpt(agent, gateway, world, bc);
            break;
        }
        r.success = goal_met(start, world, task);
        r.iterations = agent.iterations();
        events->append({{"type", "zero_shot_result"}, {"driver", lc.driver}, {"task", task},
                        {"success", r.success}, {"iterations", r.iterations}, {"cell", r.cell()}});
        if (!o.scratch_dir.empty())
            library.persist(o.scratch_dir);
        results.push_back(r);
    }
    return results;
}

} // namespace voyager::harness

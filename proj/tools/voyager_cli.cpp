// SPDX-License-Identifier: Apache-2.0
#include "voyager/harness/runner.hpp"
#include "voyager/harness/service.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <filesystem>
#include <iostream>

using namespace voyager;

namespace {

template <typename T, typename Parse>
CLI::Validator enum_validator(Parse parse, const std::string& names)
{
    return CLI::Validator(
        [parse](std::string& s) -> std::string { return parse(s) ? "" : "unknown value '" + s + "'"; }, names);
}

void print_metrics(const harness::Metrics& m)
{
    int unique = m.unique_items_curve.empty() ? 0 : m.unique_items_curve.back().unique_items;
    fmt::print("unique items: {}\n", unique);
    for (auto tier : harness::all_tiers)
        fmt::print("{} tools: {}\n", harness::to_string(tier), harness::tier_cell(m.tech_tree, tier));
    if (m.coverage)
        fmt::print("coverage radius: {:.1f} (center {:.1f}, {:.1f})\n", m.coverage->radius, m.coverage->center.x,
                   m.coverage->center.z);
    std::vector<std::string> terrains(m.terrains.begin(), m.terrains.end());
    fmt::print("terrains: {}\n", fmt::join(terrains, ", "));
}

skills::SkillLibrary open_library(const std::string& dir)
{
    return skills::SkillLibrary::load(dir, std::make_shared<llm::HashEmbedder>());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lifelong code-writing agent in a voxel crafting world"};
    app.require_subcommand(1);

    // run
    harness::RunOptions run;
    std::string agent_name = "voyager", llm_name = "scripted", curriculum_name = "auto", oracle_name = "strong";
    std::string run_dir = "run";
    int serve_port = -1;
    bool no_feedback = false, no_errors = false, no_verify = false, no_library = false;
    auto* run_cmd = app.add_subcommand("run", "Run one lifelong exploration trial");
    run_cmd->add_option("--agent", agent_name, "voyager, react, reflexion or autogpt")
        ->check(enum_validator<baselines::Driver>(baselines::parse_driver, "DRIVER"));
    run_cmd->add_option("--config", run.world_config, "World config file (default: bundled)");
    run_cmd->add_option("--seed", run.seed, "World seed");
    run_cmd->add_option("--max-iterations", run.max_iterations, "Prompting iteration cap")->check(CLI::PositiveNumber);
    run_cmd->add_option("--llm", llm_name, "live, scripted or replay")
        ->check(enum_validator<harness::LlmMode>(harness::parse_llm_mode, "MODE"));
    run_cmd->add_option("--cassette", run.cassette, "Recorded exchanges for --llm replay");
    run_cmd->add_option("--run-dir", run_dir, "Output directory");
    run_cmd->add_option("--curriculum", curriculum_name, "auto, manual, random or human")
        ->check(enum_validator<curriculum::Proposer>(curriculum::parse_proposer, "MODE"));
    run_cmd->add_option("--library", run.library_dir, "Start from this skill library");
    run_cmd->add_option("--oracle", oracle_name, "Scripted oracle strength: strong or weak");
    run_cmd->add_option("--base-url", run.live.base_url, "Chat API base URL for --llm live");
    run_cmd->add_option("--model", run.live.default_model, "Model for --llm live");
    run_cmd->add_flag("--no-env-feedback", no_feedback, "Leave the chat log out of code prompts");
    run_cmd->add_flag("--no-exec-errors", no_errors, "Leave execution errors out of code prompts");
    run_cmd->add_flag("--no-self-verification", no_verify, "Run every episode for all rounds without a verifier");
    run_cmd->add_flag("--no-skill-library", no_library, "Disable retrieval and skill commits");
    run_cmd->add_flag("--human-critic", run.human_critic, "Wait for verdicts posted to /api/critique");
    run_cmd->add_flag("--attach-skill-library", run.attach_skill_library, "AutoGPT: retrieve from the library");
    run_cmd->add_option("--serve", serve_port, "Serve the HTTP API on this port while running");

    // eval zero-shot
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a skill library");
    eval_cmd->require_subcommand(1);
    harness::ZeroShotOptions zs;
    std::string zs_agent = "voyager", zs_llm = "scripted", zs_oracle = "strong", zs_cassette;
    auto* zs_cmd = eval_cmd->add_subcommand("zero-shot", "Unseen tasks in a new world with an empty inventory");
    zs_cmd->add_option("--library", zs.library_dir, "Skill library directory (omit for none)");
    zs_cmd->add_option("--task", zs.tasks, "Task, repeatable")->required();
    zs_cmd->add_option("--max-iterations", zs.max_iterations, "Iteration cap per task")->check(CLI::PositiveNumber);
    zs_cmd->add_option("--seed", zs.seed, "World seed");
    zs_cmd->add_option("--agent", zs_agent, "voyager, react, reflexion or autogpt")
        ->check(enum_validator<baselines::Driver>(baselines::parse_driver, "DRIVER"));
    zs_cmd->add_option("--llm", zs_llm, "live, scripted or replay")
        ->check(enum_validator<harness::LlmMode>(harness::parse_llm_mode, "MODE"));
    zs_cmd->add_option("--cassette", zs_cassette, "Recorded exchanges for --llm replay");
    zs_cmd->add_option("--oracle", zs_oracle, "Scripted oracle strength: strong or weak");
    zs_cmd->add_option("--scratch", zs.scratch_dir, "Where skills learned during evaluation are written");

    // skills
    auto* skills_cmd = app.add_subcommand("skills", "Inspect a skill library");
    skills_cmd->require_subcommand(1);
    std::string lib_dir = "run/skills", skill_name, query_text;
    int k = 5;
    auto* list_cmd = skills_cmd->add_subcommand("list", "Names, iterations and descriptions");
    list_cmd->add_option("--library", lib_dir, "Library directory");
    auto* show_cmd = skills_cmd->add_subcommand("show", "Print one skill");
    show_cmd->add_option("--library", lib_dir, "Library directory");
    show_cmd->add_option("name", skill_name, "Skill name")->required();
    auto* query_cmd = skills_cmd->add_subcommand("query", "Top-k retrieval for a text");
    query_cmd->add_option("--library", lib_dir, "Library directory");
    query_cmd->add_option("text", query_text, "Query text")->required();
    query_cmd->add_option("-k", k, "Number of results")->check(CLI::PositiveNumber);

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from a run directory");
    std::string metrics_dir = "run";
    metrics_cmd->add_option("--run", metrics_dir, "Run directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            run.driver = *baselines::parse_driver(agent_name);
            run.llm = *harness::parse_llm_mode(llm_name);
            run.curriculum = *curriculum::parse_proposer(curriculum_name);
            run.oracle = oracle_name == "weak" ? harness::OracleStrength::weak : harness::OracleStrength::strong;
            run.run_dir = run_dir;
            run.ablation.include_env_feedback = !no_feedback;
            run.ablation.include_execution_errors = !no_errors;
            run.ablation.use_self_verification = !no_verify;
            run.ablation.use_skill_library = !no_library;
            harness::Experiment experiment(run);
            std::unique_ptr<harness::Service> service;
            if (serve_port >= 0) {
                service = std::make_unique<harness::Service>(experiment.control(), experiment.events(),
                                                             &experiment.curriculum());
                int port = service->start("127.0.0.1", serve_port);
                fmt::print("serving on http://127.0.0.1:{}/\n", port);
            }
            auto result = experiment.run();
            fmt::print("iterations: {} ({})\n", result.iterations, result.stop_reason);
            fmt::print("tasks completed: {}, failed: {}, skills: {}\n", result.completed, result.failed,
                       result.skills);
            print_metrics(result.metrics);
            fmt::print("run directory: {}\n", run_dir);
            return 0;
        }
        if (zs_cmd->parsed()) {
            zs.driver = *baselines::parse_driver(zs_agent);
            harness::RunOptions backend;
            backend.llm = *harness::parse_llm_mode(zs_llm);
            backend.cassette = zs_cassette;
            backend.oracle = zs_oracle == "weak" ? harness::OracleStrength::weak : harness::OracleStrength::strong;
            auto [provider, embedder] = harness::make_backend(backend);
            zs.provider = provider;
            zs.embedder = embedder;
            for (const auto& r : harness::run_zero_shot(zs))
                fmt::print("{}: {} ({} iterations, seed {}, {} skills)\n", r.task, r.cell(), r.iterations, r.seed,
                           r.library_size);
            return 0;
        }
        if (list_cmd->parsed()) {
            auto lib = open_library(lib_dir);
            for (const auto& s : lib.skills())
                fmt::print("{}\t{}\t{}\n", s.name, s.created_at_iteration, s.description);
            return 0;
        }
        if (show_cmd->parsed()) {
            auto lib = open_library(lib_dir);
            const auto* s = lib.find(skill_name);
            if (!s) {
                fmt::print(stderr, "no skill named '{}'\n", skill_name);
                return 1;
            }
            fmt::print("{}\n\n{}\n", s->description, s->source);
            return 0;
        }
        if (query_cmd->parsed()) {
            auto lib = open_library(lib_dir);
            for (const auto& r : lib.retrieve_text(query_text, k))
                fmt::print("{:.4f}\t{}\n", r.similarity, r.skill->name);
            return 0;
        }
        if (metrics_cmd->parsed()) {
            auto events = agent::EventLog::read_file((std::filesystem::path(metrics_dir) / "events.log").string());
            print_metrics(harness::compute_metrics(events));
            return 0;
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}

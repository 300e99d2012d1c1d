// SPDX-License-Identifier: Apache-2.0
#include "agent_fixture.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace voyager;
using agent::EpisodeFinal;

namespace {

const std::string chestplate_program = R"(```
fn craftIronChestplate() {
    if !block_nearby("crafting_table") {
        placeItem("crafting_table", free_spot());
    }
    craftItem("iron_chestplate", 1);
}
```)";

const std::string bad_recipe_program = R"(```
fn craftAxe() {
    craftItem("acacia_axe", 1);
}
```)";

const std::string log_program = R"(```
fn mineLogs() {
    mineBlock("oak_log", 1);
}
```)";

agent::LoopConfig quiet_config()
{
    agent::LoopConfig c;
    c.task_context = false;
    return c;
}

std::shared_ptr<llm::ScriptedProvider> provider_with(std::string codegen, bool verdict,
                                                     std::string critique = "Craft the item.")
{
    auto p = std::make_shared<llm::ScriptedProvider>();
    p->on(llm::Role::codegen, [codegen](const llm::ChatRequest&) { return codegen; });
    p->on(llm::Role::verifier, [verdict, critique](const llm::ChatRequest&) {
        return verdict ? std::string("Reasoning: done\nSuccess: true")
                       : "Reasoning: not yet\nSuccess: false\nCritique: " + critique;
    });
    p->on(llm::Role::describe, [](const llm::ChatRequest&) { return "Does the thing."; });
    return p;
}

std::string user_prompt(const voyager::testing::ScriptedRun& run, std::size_t codegen_index)
{
    std::size_t seen = 0;
    for (const auto& ex : run.gateway.transcript())
        if (ex.request.role == llm::Role::codegen && seen++ == codegen_index)
            return ex.request.user_prompt;
    ADD_FAILURE() << "no codegen call " << codegen_index;
    return {};
}

std::size_t calls(const voyager::testing::ScriptedRun& run, llm::Role role)
{
    std::size_t n = 0;
    for (const auto& ex : run.gateway.transcript())
        n += ex.request.role == role;
    return n;
}

void give_chestplate_materials(voyager::testing::ScriptedRun& run)
{
    run.world.set_inventory({{"crafting_table", 1}, {"iron_ingot", 1}});
}

} // namespace

TEST(Extract, ExactlyOneParsedBlock)
{
    auto ok = agent::extract_program("Plan: mine.\n```js\nfn a() { chat(\"hi\"); }\n```\nDone.");
    ASSERT_TRUE(ok.source);
    EXPECT_EQ(*ok.source, "fn a() { chat(\"hi\"); }\n");

    EXPECT_EQ(agent::extract_program("no code here").error, "no code block in the response");
    EXPECT_EQ(agent::extract_program("```\nfn a() {}\n```\n```\nfn b() {}\n```").error,
              "ambiguous response: 2 code blocks, expected exactly one");
    EXPECT_EQ(agent::extract_program("```\nfn a() {}\n").error, "code block is not closed");
    auto broken = agent::extract_program("```\nfn a( {\n```");
    EXPECT_FALSE(broken.source);
    EXPECT_FALSE(broken.error.empty());
}

TEST(CodegenPrompt, FirstRoundHasNoLastRoundBlocks)
{
    voyager::testing::ScriptedRun run(provider_with(chestplate_program, false), 1, [] {
        auto c = quiet_config();
        c.max_rounds = 2;
        return c;
    }());
    give_chestplate_materials(run);
    auto ep = run.agent.run_episode(curriculum::make_task("Craft 1 iron chestplate", curriculum::Proposer::automatic));
    ASSERT_EQ(ep.rounds.size(), 2u);

    auto first = user_prompt(run, 0);
    for (const char* label : {"Code from the last round", "Execution error", "Chat log", "Critique"})
        EXPECT_EQ(first.find(label), std::string::npos) << label;
    EXPECT_NE(first.find("Task: Craft 1 iron chestplate"), std::string::npos);
    EXPECT_NE(first.find("Context: None"), std::string::npos);

    auto second = user_prompt(run, 1);
    EXPECT_NE(second.find("Code from the last round:\n```\nfn craftIronChestplate()"), std::string::npos) << second;
    EXPECT_NE(second.find("Execution error: No error"), std::string::npos);
    EXPECT_NE(second.find("Chat log:\nPlaced crafting table at"), std::string::npos) << second;
    EXPECT_NE(second.find("\nI cannot make an iron chestplate because I need: 7 more iron ingots\n"),
              std::string::npos);
    EXPECT_NE(second.find("Critique: Craft the item."), std::string::npos);
}

TEST(CodegenPrompt, EnvFeedbackAblationRemovesOnlyTheChatLog)
{
    auto run_with = [](bool feedback) {
        auto c = quiet_config();
        c.max_rounds = 2;
        c.ablation.include_env_feedback = feedback;
        auto run = std::make_unique<voyager::testing::ScriptedRun>(provider_with(chestplate_program, false), 1, c);
        give_chestplate_materials(*run);
        run->agent.run_episode(curriculum::make_task("Craft 1 iron chestplate", curriculum::Proposer::automatic));
        return user_prompt(*run, 1);
    };
    auto full = run_with(true);
    auto ablated = run_with(false);
    auto at = full.find("Chat log:\n");
    auto end = full.find("Critique:", at);
    ASSERT_NE(at, std::string::npos);
    ASSERT_NE(end, std::string::npos);
    EXPECT_NE(full.substr(at, end - at).find("7 more iron ingots"), std::string::npos);
    EXPECT_EQ(full.substr(0, at) + full.substr(end), ablated);
}

TEST(CodegenPrompt, ErrorAndCritiqueAblations)
{
    auto c = quiet_config();
    c.max_rounds = 2;
    c.ablation.include_execution_errors = false;
    voyager::testing::ScriptedRun run(provider_with(bad_recipe_program, false), 1, c);
    run.agent.run_episode(curriculum::make_task("Craft 1 acacia axe", curriculum::Proposer::automatic));
    EXPECT_EQ(user_prompt(run, 1).find("Execution error"), std::string::npos);

    auto v = quiet_config();
    v.max_rounds = 2;
    v.ablation.use_self_verification = false;
    voyager::testing::ScriptedRun unverified(provider_with(bad_recipe_program, true), 1, v);
    unverified.agent.run_episode(curriculum::make_task("Craft 1 acacia axe", curriculum::Proposer::automatic));
    EXPECT_EQ(user_prompt(unverified, 1).find("Critique"), std::string::npos);
    EXPECT_EQ(calls(unverified, llm::Role::verifier), 0u);
}

TEST(Episode, ExecutionErrorIsThreadedIntoTheNextRound)
{
    auto c = quiet_config();
    c.max_rounds = 2;
    voyager::testing::ScriptedRun run(provider_with(bad_recipe_program, false), 1, c);
    auto ep = run.agent.run_episode(curriculum::make_task("Craft 1 acacia axe", curriculum::Proposer::automatic));
    ASSERT_TRUE(ep.rounds[0].outcome.error);
    auto rendered = ep.rounds[0].outcome.error->render();
    EXPECT_NE(rendered.find("no recipe for 'acacia_axe'"), std::string::npos) << rendered;
    EXPECT_NE(user_prompt(run, 1).find("Execution error:\n" + rendered), std::string::npos);
}

TEST(Episode, UnusableResponsesAbandonAfterFourRounds)
{
    voyager::testing::ScriptedRun run(provider_with("I would rather not write code.", true), 1, quiet_config());
    auto task = curriculum::make_task("Mine 1 coal", curriculum::Proposer::automatic);
    auto ep = run.agent.run_episode(task);
    EXPECT_EQ(ep.final, EpisodeFinal::abandoned);
    ASSERT_EQ(ep.rounds.size(), 4u);
    for (const auto& r : ep.rounds) {
        EXPECT_TRUE(r.program_source.empty());
        EXPECT_EQ(r.verdict.critique, "No program was run.");
    }
    EXPECT_EQ(calls(run, llm::Role::verifier), 0u);
    EXPECT_EQ(run.agent.iterations(), 4);
    ASSERT_EQ(run.agent.progress().failed.size(), 1u);
    EXPECT_EQ(run.agent.progress().failed[0].id, task.id);
    EXPECT_EQ(run.library.size(), 0u);
    EXPECT_NE(user_prompt(run, 1).find("Code from the last round: None"), std::string::npos);
}

TEST(Episode, VerifierRejectionCommitsNothing)
{
    voyager::testing::ScriptedRun run(provider_with(log_program, false), 1, quiet_config());
    auto ep = run.agent.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::automatic));
    EXPECT_EQ(ep.final, EpisodeFinal::abandoned);
    EXPECT_EQ(ep.rounds.size(), 4u);
    EXPECT_EQ(run.library.size(), 0u);
    EXPECT_EQ(calls(run, llm::Role::describe), 0u);
    // The rule check can disagree with the verifier; it is logged, not acted on.
    EXPECT_EQ(ep.rounds[0].rule_check, std::optional<bool>(true));
}

TEST(Episode, VerifiedSuccessCommitsOneSkill)
{
    voyager::testing::ScriptedRun run(provider_with(log_program, true), 1, quiet_config());
    auto ep = run.agent.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::automatic));
    EXPECT_EQ(ep.final, EpisodeFinal::success);
    EXPECT_EQ(ep.rounds.size(), 1u);
    EXPECT_EQ(ep.committed_skill, std::optional<std::string>("mineLogs"));
    EXPECT_EQ(run.library.size(), 1u);
    EXPECT_EQ(run.library.find("mineLogs")->description, "Does the thing.");
    EXPECT_EQ(run.agent.progress().completed.size(), 1u);
}

TEST(Episode, WithoutVerificationAllRoundsRun)
{
    auto c = quiet_config();
    c.ablation.use_self_verification = false;
    voyager::testing::ScriptedRun run(provider_with(log_program, true), 1, c);
    auto ep = run.agent.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::automatic));
    EXPECT_EQ(ep.rounds.size(), 4u);
    EXPECT_EQ(ep.final, EpisodeFinal::success);
    EXPECT_EQ(calls(run, llm::Role::verifier), 0u);
}

TEST(Episode, WithoutLibraryNothingIsCommitted)
{
    auto c = quiet_config();
    c.ablation.use_skill_library = false;
    voyager::testing::ScriptedRun run(provider_with(log_program, true), 1, c);
    auto ep = run.agent.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::automatic));
    EXPECT_EQ(ep.final, EpisodeFinal::success);
    EXPECT_FALSE(ep.committed_skill);
    EXPECT_EQ(run.library.size(), 0u);
}

TEST(Episode, GatewayFailureAborts)
{
    auto p = std::make_shared<llm::ScriptedProvider>();
    voyager::testing::ScriptedRun run(p, 1, quiet_config());
    auto task = curriculum::make_task("Mine 1 coal", curriculum::Proposer::automatic);
    auto ep = run.agent.run_episode(task);
    EXPECT_EQ(ep.final, EpisodeFinal::aborted);
    EXPECT_NE(ep.abort_reason.find("no response for role codegen"), std::string::npos);
    EXPECT_TRUE(run.agent.progress().failed.empty());
    EXPECT_TRUE(run.agent.progress().completed.empty());
}

TEST(Episode, IterationCapTruncates)
{
    auto c = quiet_config();
    c.max_iterations = 6;
    voyager::testing::ScriptedRun run(provider_with("nothing", true), 1, c);
    auto summary = run.agent.run_lifelong();
    EXPECT_EQ(summary.iterations, 6);
    EXPECT_TRUE(summary.truncated);
    ASSERT_EQ(summary.episodes.size(), 2u);
    EXPECT_EQ(summary.episodes[0].final, EpisodeFinal::abandoned);
    EXPECT_EQ(summary.episodes[1].final, EpisodeFinal::truncated);
    EXPECT_EQ(summary.episodes[1].rounds.size(), 2u);
    EXPECT_EQ(run.agent.progress().failed.size(), 1u);
    EXPECT_EQ(summary.stop_reason, "iteration cap");
}

TEST(Episode, HumanCritic)
{
    auto c = quiet_config();
    c.human_critic = true;
    auto provider = provider_with(log_program, true);
    llm::Gateway gateway(provider, voyager::testing::hash_embedder());
    auto world = craftworld::World::create(craftworld::default_world_config(1));
    skills::SkillLibrary library(voyager::testing::hash_embedder());
    agent::LoopControl control;
    agent::Agent a(world, gateway, library, nullptr, c, nullptr, &control);

    EXPECT_FALSE(control.offer_critique({true, "", "", true}));
    agent::EpisodeRecord ep;
    std::thread loop([&] { ep = a.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::human)); });
    auto deliver = [&](verifier::VerificationResult v) {
        while (!control.verification_pending())
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        EXPECT_TRUE(control.offer_critique(std::move(v)));
    };
    deliver({false, "Use a birch log instead.", "", true});
    deliver({true, "", "", true});
    loop.join();
    EXPECT_FALSE(control.verification_pending());
    EXPECT_EQ(ep.final, EpisodeFinal::success);
    ASSERT_EQ(ep.rounds.size(), 2u);
    std::size_t codegen = 0;
    std::string second;
    for (const auto& ex : gateway.transcript())
        if (ex.request.role == llm::Role::codegen && codegen++ == 1)
            second = ex.request.user_prompt;
    EXPECT_NE(second.find("Critique: Use a birch log instead."), std::string::npos);
    for (const auto& ex : gateway.transcript())
        EXPECT_NE(ex.request.role, llm::Role::verifier);
}

TEST(Lifelong, ManualOracleRunCompletesEveryTask)
{
    voyager::testing::ScriptedRun run(harness::make_oracle(harness::OracleOptions::standard()));
    auto summary = run.agent.run_lifelong();
    EXPECT_EQ(summary.stop_reason, "curriculum exhausted");
    EXPECT_EQ(run.agent.progress().completed.size(), curriculum::manual_tasks().size());
    EXPECT_EQ(run.library.size(), curriculum::manual_tasks().size());
    for (const auto& ep : summary.episodes)
        EXPECT_EQ(ep.rounds.size(), 1u) << ep.task.description;
}

TEST(Lifelong, EventLogsAreByteIdenticalAcrossRuns)
{
    auto once = [] {
        agent::LoopConfig c;
        c.max_iterations = 40;
        voyager::testing::ScriptedRun run(harness::make_oracle(harness::OracleOptions::standard()), 7, c,
                                          curriculum::Proposer::automatic);
        run.agent.run_lifelong();
        return run.events.text();
    };
    auto a = once();
    auto b = once();
    EXPECT_GT(a.size(), 1000u);
    EXPECT_EQ(a, b);
}

TEST(Lifelong, CurriculumFailuresStopTheRun)
{
    auto p = provider_with(log_program, true);
    p->on(llm::Role::curriculum, [](const llm::ChatRequest&) { return std::string("no task line"); });
    voyager::testing::ScriptedRun run(p, 1, quiet_config(), curriculum::Proposer::automatic);
    auto summary = run.agent.run_lifelong();
    EXPECT_EQ(summary.stop_reason, "curriculum keeps failing");
    EXPECT_EQ(summary.iterations, 0);
    std::size_t errors = 0;
    for (const auto& e : run.events.all())
        errors += e["type"] == "curriculum_error";
    EXPECT_EQ(errors, 5u);
}

TEST(Lifelong, RoundEventsCarryObservations)
{
    voyager::testing::ScriptedRun run(provider_with(log_program, true), 1, quiet_config());
    run.agent.run_episode(curriculum::make_task("Mine 1 wood log", curriculum::Proposer::automatic));
    nlohmann::json round;
    for (const auto& e : run.events.all())
        if (e["type"] == "round")
            round = e;
    ASSERT_FALSE(round.is_null());
    EXPECT_EQ(round["iteration"], 1);
    EXPECT_EQ(round["driver"], "voyager");
    EXPECT_EQ(round["position"].size(), 3u);
    EXPECT_FALSE(round["biome"].get<std::string>().empty());
    bool has_log = false;
    for (const auto& item : round["new_items"])
        has_log |= item.get<std::string>().find("_log") != std::string::npos;
    EXPECT_TRUE(has_log);
}

// SPDX-License-Identifier: Apache-2.0
#include "agent_fixture.hpp"

#include "voyager/baselines/baselines.hpp"

#include <gtest/gtest.h>

using namespace voyager;
using namespace voyager::baselines;

namespace {

const std::string failing_program = "```\nfn tryAxe() {\n    chat(\"trying\");\n    craftItem(\"acacia_axe\", 1);\n}\n```";
const std::string idle_program = "```\nfn idle() {\n    chat(\"looking around\");\n}\n```";

std::shared_ptr<llm::ScriptedProvider> provider(std::string codegen)
{
    auto p = std::make_shared<llm::ScriptedProvider>();
    p->on(llm::Role::codegen, [codegen](const llm::ChatRequest&) { return codegen; });
    p->on(llm::Role::verifier,
          [](const llm::ChatRequest&) { return std::string("Success: false\nCritique: Find an axe recipe."); });
    p->on(llm::Role::decompose, [](const llm::ChatRequest&) {
        return std::string("Plan:\n1. Look around\n2. Look further\n3) Look again\n- Keep looking\n");
    });
    return p;
}

std::vector<std::string> codegen_prompts(const llm::Gateway& gateway)
{
    std::vector<std::string> out;
    for (const auto& ex : gateway.transcript())
        if (ex.request.role == llm::Role::codegen)
            out.push_back(ex.request.user_prompt);
    return out;
}

std::size_t count_events(const agent::EventLog& log, std::string_view type)
{
    std::size_t n = 0;
    for (const auto& e : log.all())
        n += e["type"] == type;
    return n;
}

} // namespace

TEST(Baselines, DriverConfigurations)
{
    BaselineConfig bc;
    auto react = loop_config(Driver::react, bc);
    EXPECT_TRUE(react.ablation.include_env_feedback);
    EXPECT_FALSE(react.ablation.include_execution_errors);
    EXPECT_FALSE(react.ablation.use_self_verification);
    EXPECT_FALSE(react.ablation.use_skill_library);
    EXPECT_FALSE(react.task_context);

    auto reflexion = loop_config(Driver::reflexion, bc);
    EXPECT_TRUE(reflexion.ablation.include_execution_errors);
    EXPECT_TRUE(reflexion.ablation.use_self_verification);
    EXPECT_FALSE(reflexion.ablation.use_skill_library);

    auto autogpt = loop_config(Driver::autogpt, bc);
    EXPECT_FALSE(autogpt.ablation.use_self_verification);
    EXPECT_FALSE(autogpt.ablation.use_skill_library);
    bc.attach_skill_library = true;
    EXPECT_TRUE(loop_config(Driver::autogpt, bc).ablation.use_skill_library);

    EXPECT_TRUE(loop_config(Driver::voyager, bc).task_context);
    EXPECT_EQ(parse_driver("ReAct"), Driver::react);
    EXPECT_FALSE(parse_driver("babyagi"));
}

TEST(Baselines, ReactRunsFortyCyclesWithoutErrorsOrCritiques)
{
    BaselineConfig bc;
    voyager::testing::ScriptedRun run(provider(failing_program), 1, loop_config(Driver::react, bc));
    auto summary = run_react(run.agent, bc);
    EXPECT_EQ(summary.iterations, 160);
    EXPECT_EQ(summary.cycles, 40);
    EXPECT_EQ(count_events(run.events, "cycle"), 40u);
    auto prompts = codegen_prompts(run.gateway);
    ASSERT_EQ(prompts.size(), 160u);
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        EXPECT_EQ(prompts[i].find("Execution error"), std::string::npos);
        EXPECT_EQ(prompts[i].find("Critique"), std::string::npos);
        // Each cycle starts from scratch.
        EXPECT_EQ(prompts[i].find("Chat log") != std::string::npos, i % 4 != 0) << i;
    }
    EXPECT_NE(prompts[1].find("Chat log:\ntrying"), std::string::npos);
    EXPECT_EQ(run.library.size(), 0u);
}

TEST(Baselines, ReflexionThreadsErrorsAndCritiques)
{
    BaselineConfig bc;
    bc.max_iterations = 8;
    voyager::testing::ScriptedRun run(provider(failing_program), 1, loop_config(Driver::reflexion, bc));
    auto summary = run_reflexion(run.agent, bc);
    EXPECT_EQ(summary.cycles, 2);
    auto prompts = codegen_prompts(run.gateway);
    ASSERT_EQ(prompts.size(), 8u);
    EXPECT_EQ(prompts[0].find("Execution error"), std::string::npos);
    EXPECT_NE(prompts[1].find("Execution error:\n"), std::string::npos);
    EXPECT_NE(prompts[1].find("no recipe for 'acacia_axe'"), std::string::npos);
    EXPECT_NE(prompts[1].find("Critique: Find an axe recipe."), std::string::npos);
    EXPECT_EQ(prompts[4].find("Critique"), std::string::npos);
    EXPECT_EQ(run.library.size(), 0u);
}

TEST(Baselines, DoneEndsTheRunEarly)
{
    BaselineConfig bc;
    int checks = 0;
    bc.done = [&checks] { return ++checks == 3; };
    voyager::testing::ScriptedRun run(provider(idle_program), 1, loop_config(Driver::react, bc));
    auto summary = run_react(run.agent, bc);
    EXPECT_TRUE(summary.goal_reached);
    EXPECT_EQ(summary.iterations, 12);
}

TEST(Baselines, SubgoalParsing)
{
    EXPECT_EQ(parse_subgoals("Here is a plan\n1. Mine logs\n 2) Craft planks \n\n- Craft table\nnote\n3.\n"),
              (std::vector<std::string>{"Mine logs", "Craft planks", "Craft table"}));
    auto p = std::make_shared<llm::ScriptedProvider>();
    p->push(llm::Role::decompose, "I cannot help with that.");
    llm::Gateway g(p, voyager::testing::hash_embedder());
    EXPECT_EQ(decompose("Get rich", {}, g), std::vector<std::string>{"Get rich"});
    EXPECT_DOUBLE_EQ(g.transcript()[0].request.temperature, 0.0);
}

TEST(Baselines, AutoGptReplansAfterThreeIdleSubgoals)
{
    BaselineConfig bc;
    bc.max_iterations = 9;
    voyager::testing::ScriptedRun run(provider(idle_program), 1, loop_config(Driver::autogpt, bc));
    auto summary = run_autogpt(run.agent, run.gateway, run.world, bc);
    // Every subgoal runs cleanly in one round and gains nothing: plan, 3 subgoals, replan, ...
    EXPECT_EQ(summary.iterations, 9);
    EXPECT_EQ(summary.subgoals,
              (std::vector<std::string>{"Look around", "Look further", "Look again", "Look around", "Look further",
                                        "Look again", "Look around", "Look further", "Look again"}));
    EXPECT_EQ(summary.replans, 2);
    EXPECT_EQ(count_events(run.events, "replan"), 3u);
    EXPECT_EQ(count_events(run.events, "plan"), 3u);
    for (const auto& e : run.events.all())
        if (e["type"] == "subgoal")
            EXPECT_TRUE(e["completed"].get<bool>());
}

TEST(Baselines, AutoGptRetriesFailingSubgoalsThenMovesOn)
{
    BaselineConfig bc;
    bc.max_iterations = 8;
    voyager::testing::ScriptedRun run(provider(failing_program), 1, loop_config(Driver::autogpt, bc));
    auto summary = run_autogpt(run.agent, run.gateway, run.world, bc);
    EXPECT_EQ(summary.subgoals, (std::vector<std::string>{"Look around", "Look further"}));
    for (const auto& e : run.events.all())
        if (e["type"] == "subgoal") {
            EXPECT_FALSE(e["completed"].get<bool>());
            EXPECT_EQ(e["rounds"], 4);
        }
    auto prompts = codegen_prompts(run.gateway);
    EXPECT_NE(prompts[1].find("Execution error:\n"), std::string::npos);
    EXPECT_EQ(prompts[1].find("Critique"), std::string::npos);
}

TEST(Baselines, AutoGptNewItemsResetTheStreak)
{
    BaselineConfig bc;
    bc.max_iterations = 6;
    auto p = provider(idle_program);
    // Each subgoal mines one new kind of block.
    auto n = std::make_shared<int>(0);
    p->on(llm::Role::codegen, [n](const llm::ChatRequest&) {
        static const std::vector<std::string> blocks = {"dirt", "oak_log", "sand", "gravel", "clay", "stone"};
        return "```\nfn grab() {\n    mineBlock(\"" + blocks[static_cast<std::size_t>((*n)++) % blocks.size()] +
               "\", 1);\n}\n```";
    });
    voyager::testing::ScriptedRun run(p, 1, loop_config(Driver::autogpt, bc));
    auto summary = run_autogpt(run.agent, run.gateway, run.world, bc);
    EXPECT_EQ(count_events(run.events, "replan"), 0u);
    EXPECT_EQ(summary.replans, 1); // the four-item plan simply ran out
}

// SPDX-License-Identifier: Apache-2.0
#include "voyager/curriculum/curriculum.hpp"

#include "voyager/llm/prompts.hpp"
#include "voyager/util/text.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace voyager;
using namespace voyager::curriculum;

namespace {

craftworld::AgentState rich_state()
{
    craftworld::AgentState s;
    s.inventory = {{"oak_log", 3},   {"spruce_planks", 4}, {"stick", 2},         {"crafting_table", 1},
                   {"furnace", 1},   {"dirt", 9},          {"coal", 2},          {"wooden_pickaxe", 1},
                   {"stone_sword", 1}, {"iron_axe", 1},    {"cobblestone", 20},  {"iron_ingot", 3},
                   {"diamond", 1},   {"white_wool", 2}};
    s.equipment = {{craftworld::EquipSlot::hand, "wooden_pickaxe"}};
    s.nearby_blocks = {"grass_block", "oak_log", "stone"};
    s.recently_seen_blocks = {"iron_ore", "sand"};
    s.nearby_entities = {"sheep"};
    s.known_chests = {{craftworld::Position{3, 64, 2}, std::nullopt}};
    s.biome = "forest";
    s.time_of_day = craftworld::TimeOfDay::noon;
    s.health = 18;
    s.hunger = 15;
    s.position = {1, 64, -2};
    return s;
}

Progress completed_n(std::size_t n)
{
    Progress p;
    for (std::size_t i = 0; i < n; ++i)
        p.completed.push_back(make_task("Task number " + std::to_string(i), Proposer::automatic));
    return p;
}

// Table of prompt fields and the completion count that unlocks them, transcribed by hand.
std::set<std::string> expected_labels(std::size_t n)
{
    const std::vector<std::pair<std::string, std::size_t>> table = {
        {"Inventory", 0},       {"Equipment", 0}, {"Nearby blocks", 0}, {"Position", 0},
        {"Nearby entities", 5}, {"Chests", 7},    {"Other blocks that are recently seen", 10},
        {"Biome", 10},          {"Health", 15},   {"Hunger", 15},       {"Time", 15}};
    std::set<std::string> out;
    for (const auto& [label, at] : table)
        if (n >= at)
            out.insert(label);
    return out;
}

std::shared_ptr<llm::ScriptedProvider> counting_provider(int& asks, std::string task = "Mine 1 coal")
{
    auto p = std::make_shared<llm::ScriptedProvider>();
    p->on(llm::Role::qa_ask, [&asks](const llm::ChatRequest&) {
        ++asks;
        return std::string("Question 1: How to mine coal?\nConcept 1: coal\nQuestion 2: What is a furnace?\nConcept 2: furnace");
    });
    p->on(llm::Role::qa_answer, [](const llm::ChatRequest& r) { return "Answer to " + r.user_prompt; });
    p->on(llm::Role::curriculum, [task](const llm::ChatRequest&) { return "Reasoning: next.\nTask: " + task; });
    return p;
}

} // namespace

TEST(Warmup, FieldsMatchTheScheduleAtEachCount)
{
    auto schedule = WarmupSchedule::standard();
    auto state = rich_state();
    const std::set<std::string> core = {"oak_log", "spruce_planks", "stick", "crafting_table", "furnace",
                                        "dirt",    "coal",          "wooden_pickaxe", "stone_sword", "iron_axe"};
    for (std::size_t n : {0u, 4u, 5u, 6u, 7u, 9u, 10u, 14u, 15u, 20u}) {
        auto view = warmup_filter(state, n, schedule);
        auto labels = agent::field_labels(view);
        EXPECT_EQ(std::set<std::string>(labels.begin(), labels.end()), expected_labels(n)) << "n = " << n;
        ASSERT_TRUE(view.inventory);
        std::set<std::string> shown;
        for (const auto& [item, count] : *view.inventory)
            shown.insert(item);
        if (n < 7) {
            EXPECT_TRUE(view.core_inventory_only);
            EXPECT_EQ(shown, core) << "n = " << n;
            EXPECT_NE(agent::render(view).find("Inventory (10 core items)"), std::string::npos);
        } else {
            EXPECT_FALSE(view.core_inventory_only);
            EXPECT_EQ(shown.size(), state.inventory.size()) << "n = " << n;
            EXPECT_NE(agent::render(view).find("Inventory (14/36)"), std::string::npos);
        }
    }
}

TEST(Warmup, IncludedFieldsNeverShrink)
{
    auto schedule = WarmupSchedule::standard();
    auto state = rich_state();
    std::set<std::string> previous;
    for (std::size_t n = 0; n <= 25; ++n) {
        auto labels = agent::field_labels(warmup_filter(state, n, schedule));
        std::set<std::string> now(labels.begin(), labels.end());
        EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end())) << n;
        previous = now;
    }
}

TEST(Warmup, AdditionalContextStartsAtFifteen)
{
    for (std::size_t n : {14u, 15u}) {
        int asks = 0;
        llm::Gateway gateway(counting_provider(asks), std::make_shared<llm::HashEmbedder>());
        Curriculum c(CurriculumConfig{}, &gateway);
        auto t = c.next(rich_state(), completed_n(n));
        ASSERT_TRUE(t);
        EXPECT_EQ(t->description, "Mine 1 coal");
        EXPECT_EQ(asks, n >= 15 ? 1 : 0);
        EXPECT_EQ(c.last_context().size(), n >= 15 ? 2u : 0u);
        auto prompt = gateway.transcript().back().request.user_prompt;
        EXPECT_EQ(prompt.find("Question 1: How to mine coal?") != std::string::npos, n >= 15);
    }
}

TEST(Warmup, ScheduleValidation)
{
    auto s = WarmupSchedule::standard();
    s.thresholds[Field::core_inventory] = 9;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = WarmupSchedule::standard();
    s.thresholds[Field::biome] = -1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Curriculum, PromptCarriesBothLedgers)
{
    int asks = 0;
    llm::Gateway gateway(counting_provider(asks), std::make_shared<llm::HashEmbedder>());
    Curriculum c(CurriculumConfig{}, &gateway);
    Progress p;
    p.record_outcome(make_task("Mine 3 wood log", Proposer::automatic), true);
    p.record_outcome(make_task("Craft 1 crafting table", Proposer::automatic), true);
    p.record_outcome(make_task("Kill 1 zombie", Proposer::automatic), false);
    c.next(rich_state(), p);
    auto t = gateway.transcript();
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].request.role, llm::Role::curriculum);
    EXPECT_DOUBLE_EQ(t[0].request.temperature, 0.1);
    const auto& u = t[0].request.user_prompt;
    EXPECT_NE(u.find("Completed tasks so far: Mine 3 wood log, Craft 1 crafting table"), std::string::npos) << u;
    EXPECT_NE(u.find("Failed tasks that are too hard: Kill 1 zombie"), std::string::npos) << u;
}

TEST(Curriculum, GoldenUserPrompt)
{
    craftworld::AgentState s;
    s.inventory = {{"oak_log", 2}, {"cobblestone", 5}};
    s.nearby_blocks = {"stone", "oak_log"};
    s.position = {4, 65, -7};
    Progress p;
    p.record_outcome(make_task("Mine 1 wood log", Proposer::automatic), true);
    auto view = warmup_filter(s, p.num_completed(), WarmupSchedule::standard());
    EXPECT_EQ(curriculum_user_prompt(view, p, {}),
              "Nearby blocks: oak_log, stone\n"
              "Position: x=4, y=65, z=-7\n"
              "Equipment: None\n"
              "Inventory (1 core items): {'oak_log': 2}\n"
              "\n"
              "Completed tasks so far: Mine 1 wood log\n"
              "Failed tasks that are too hard: None\n\n");
}

TEST(Curriculum, RepromptOnceThenError)
{
    auto provider = std::make_shared<llm::ScriptedProvider>();
    provider->push(llm::Role::curriculum, "I think you should explore.");
    provider->push(llm::Role::curriculum, "Reasoning: fine.\nTask: Craft 1 furnace.");
    llm::Gateway gateway(provider, std::make_shared<llm::HashEmbedder>());
    auto view = warmup_filter(rich_state(), 0, WarmupSchedule::standard());
    auto t = propose_next_task(view, {}, {}, gateway);
    EXPECT_EQ(t.description, "Craft 1 furnace");
    EXPECT_EQ(t.reasoning, "Reasoning: fine.");
    EXPECT_EQ(gateway.transcript().size(), 2u);
    EXPECT_NE(gateway.transcript()[1].request.user_prompt.find(llm::prompt_template("curriculum_reprompt")),
              std::string::npos);

    provider->push(llm::Role::curriculum, "nothing");
    provider->push(llm::Role::curriculum, "still nothing");
    EXPECT_THROW(propose_next_task(view, {}, {}, gateway), CurriculumError);
}

TEST(Curriculum, TaskLineParsing)
{
    EXPECT_EQ(parse_task_line("Reasoning: x\nTask: Mine 1 coal"), "Mine 1 coal");
    EXPECT_EQ(parse_task_line("task: \"Craft 1 chest\"."), "Craft 1 chest");
    EXPECT_EQ(parse_task_line("Task: a\nTask: b"), "b");
    EXPECT_FALSE(parse_task_line("Task:   "));
    EXPECT_FALSE(parse_task_line("Tasks are hard"));
}

TEST(Curriculum, QuestionParsingAndContextFailure)
{
    auto qs = parse_questions("Question 1: A?\nConcept 1: a\nQuestion 2: B?\nQuestion 3: C?\nConcept 3: c\nConcept 9: z");
    ASSERT_EQ(qs.size(), 2u);
    EXPECT_EQ(qs[0], (std::pair<std::string, std::string>{"A?", "a"}));
    EXPECT_EQ(qs[1], (std::pair<std::string, std::string>{"C?", "c"}));

    auto provider = std::make_shared<llm::ScriptedProvider>(); // no qa handlers at all
    llm::Gateway gateway(provider, std::make_shared<llm::HashEmbedder>());
    std::vector<std::string> warnings;
    auto pairs = gather_context(agent::full_view(rich_state()), {}, gateway, nullptr, 5, &warnings);
    EXPECT_TRUE(pairs.empty());
    ASSERT_EQ(warnings.size(), 1u);
}

TEST(Curriculum, DocumentsAreOfferedToTheAnswerer)
{
    auto provider = std::make_shared<llm::ScriptedProvider>();
    provider->push(llm::Role::qa_ask, "Question 1: How do I smelt?\nConcept 1: Furnace");
    provider->on(llm::Role::qa_answer, [](const llm::ChatRequest& r) { return r.user_prompt; });
    llm::Gateway gateway(provider, std::make_shared<llm::HashEmbedder>());
    DocStore docs;
    docs.add("furnace", "Furnaces need fuel.");
    auto pairs = gather_context(agent::full_view(rich_state()), {}, gateway, &docs, 5);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_NE(pairs[0].answer.find("Furnaces need fuel."), std::string::npos);
    EXPECT_EQ(render_context(pairs).rfind("Question 1: How do I smelt?\nAnswer: ", 0), 0u);
}

TEST(Curriculum, ManualSequenceThenExhausted)
{
    CurriculumConfig cfg;
    cfg.mode = Proposer::manual;
    Curriculum c(cfg, nullptr);
    auto tasks = manual_tasks();
    ASSERT_EQ(tasks.size(), 10u);
    EXPECT_EQ(tasks.front(), "Mine 3 wood log");
    EXPECT_EQ(tasks.back(), "Mine 1 diamond");
    Progress p;
    for (const auto& expected : tasks) {
        auto t = c.next({}, p);
        ASSERT_TRUE(t);
        EXPECT_EQ(t->description, expected);
        EXPECT_EQ(t->proposer, Proposer::manual);
        p.record_outcome(*t, false);
        auto again = c.next({}, p);
        EXPECT_EQ(again->description, expected);
        EXPECT_EQ(again->attempts, 1);
        p.record_outcome(*again, true);
    }
    EXPECT_FALSE(c.next({}, p));
}

TEST(Curriculum, RandomDrawsAreReproducibleAndUniform)
{
    auto pool = random_pool();
    ASSERT_FALSE(pool.empty());
    RandomCurriculum a(pool, 42), b(pool, 42);
    for (int i = 0; i < 50; ++i)
        EXPECT_EQ(a.next().description, b.next().description);

    RandomCurriculum single({"diamond"}, 1);
    for (int i = 0; i < 5; ++i)
        EXPECT_EQ(single.next().description, "Obtain 1 diamond");
    EXPECT_THROW(RandomCurriculum({}, 1).next(), CurriculumError);

    // Chi-squared goodness of fit against uniform, n = 10000.
    std::vector<std::string> small = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
    RandomCurriculum r(small, 7);
    std::map<std::string, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        ++counts[r.next().description];
    double expected = n / 10.0, chi2 = 0;
    for (const auto& item : small) {
        double d = counts["Obtain 1 " + item] - expected;
        chi2 += d * d / expected;
    }
    EXPECT_LT(chi2, 27.88); // 9 degrees of freedom, p = 0.001
}

TEST(Curriculum, HumanModeConsumesInOrder)
{
    CurriculumConfig cfg;
    cfg.mode = Proposer::human;
    Curriculum c(cfg, nullptr);
    c.human_tasks().push("build the frame");
    c.human_tasks().push("add the roof");
    c.human_tasks().close();
    EXPECT_EQ(c.next({}, {})->description, "build the frame");
    auto t = c.next({}, {});
    EXPECT_EQ(t->description, "add the roof");
    EXPECT_EQ(t->proposer, Proposer::human);
    EXPECT_FALSE(c.next({}, {}));
}

TEST(Progress, LedgersStayDisjoint)
{
    std::mt19937_64 rng(3);
    const std::vector<std::string> names = {"Mine 1 coal", "mine 1  coal", "Craft 1 chest", "Kill 1 sheep",
                                            "Smelt 3 iron ore"};
    for (int trial = 0; trial < 200; ++trial) {
        Progress p;
        std::map<std::string, int> failures_since_success;
        for (int step = 0; step < 30; ++step) {
            auto t = make_task(names[rng() % names.size()], Proposer::automatic);
            bool ok = rng() % 3 == 0;
            p.record_outcome(t, ok);
            std::set<std::string> done, failed;
            for (const auto& x : p.completed)
                ASSERT_TRUE(done.insert(x.id).second) << "duplicate completed " << x.id;
            for (const auto& x : p.failed)
                ASSERT_TRUE(failed.insert(x.id).second) << "duplicate failed " << x.id;
            for (const auto& id : done)
                ASSERT_FALSE(failed.count(id)) << id;
        }
    }
    EXPECT_EQ(task_id("  Mine 1   COAL "), task_id("mine 1 coal"));
}

TEST(Progress, FailuresCountThenSuccessMoves)
{
    Progress p;
    auto t = make_task("Kill 1 spider", Proposer::automatic);
    for (int i = 0; i < 3; ++i)
        p.record_outcome(t, false);
    ASSERT_EQ(p.failed.size(), 1u);
    EXPECT_EQ(p.failed[0].attempts, 3);
    p.record_outcome(t, true);
    EXPECT_TRUE(p.failed.empty());
    ASSERT_EQ(p.completed.size(), 1u);
    EXPECT_EQ(p.completed[0].attempts, 4);
}

TEST(Curriculum, BudgetDropsOldestCompletedFirst)
{
    auto view = warmup_filter(rich_state(), 12, WarmupSchedule::standard());
    auto p = completed_n(400);
    auto full = curriculum_user_prompt(view, p, {});
    auto budget = util::estimate_tokens(llm::prompt_template("curriculum_system")) + util::estimate_tokens(full) - 200;
    auto trimmed = p;
    auto dropped = fit_to_budget(view, trimmed, {}, budget);
    EXPECT_GT(dropped, 0u);
    EXPECT_EQ(trimmed.completed.size() + dropped, 400u);
    EXPECT_EQ(trimmed.completed.back().description, "Task number 399");
    EXPECT_TRUE(view.recently_seen_blocks);

    auto tiny = completed_n(3);
    fit_to_budget(view, tiny, {}, 10);
    EXPECT_TRUE(tiny.completed.empty());
    EXPECT_FALSE(view.recently_seen_blocks);
}

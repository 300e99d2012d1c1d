// SPDX-License-Identifier: Apache-2.0
#include "corpus.hpp"
#include "test_worlds.hpp"

#include "voyager/skillscript/analyzer.hpp"
#include "voyager/skillscript/interpreter.hpp"
#include "voyager/skillscript/parser.hpp"
#include "voyager/util/hash.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace voyager;
using namespace voyager::skillscript;

namespace {

std::shared_ptr<Function> fn_ptr(std::string_view src) { return std::make_shared<Function>(parse(src)); }

std::vector<std::string> error_messages(std::string_view src, const ApiRegistry& reg)
{
    std::vector<std::string> out;
    for (const auto& e : analyze(parse(src), reg))
        out.push_back(e.message);
    return out;
}

} // namespace

TEST(Parser, NoopFunction)
{
    auto fn = parse("fn noop() {}");
    EXPECT_EQ(fn.name, "noop");
    EXPECT_TRUE(fn.params.empty());
    EXPECT_TRUE(fn.body.empty());
}

TEST(Parser, UnbalancedBraceReportsLocation)
{
    try {
        parse("fn f() {\n    chat(\"hi\");\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.loc().line, 3);
        std::string what = e.what();
        EXPECT_NE(what.find("line 3"), std::string::npos) << what;
        EXPECT_NE(what.find("'}'"), std::string::npos) << what;
    }
}

TEST(Parser, RejectsTwoFunctions)
{
    EXPECT_THROW(parse("fn a() {} fn b() {}"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
}

TEST(Parser, RepeatNeedsPositiveLiteral)
{
    EXPECT_THROW(parse("fn f() { repeat 0 { chat(\"x\"); } }"), ParseError);
    EXPECT_THROW(parse("fn f(n = 2) { repeat n { chat(\"x\"); } }"), ParseError);
}

TEST(Parser, PrecedenceAndPrint)
{
    auto fn = parse("fn f() { let a = 1 + 2 * 3 - (4 - 5); let b = !true || 1 < 2 && 3 == 3; }");
    auto printed = print(fn);
    EXPECT_NE(printed.find("1 + 2 * 3 - (4 - 5)"), std::string::npos) << printed;
    EXPECT_EQ(parse(printed), fn);
}

TEST(Parser, CorpusParsesAndRoundTrips)
{
    auto sources = voyager::testing::corpus_sources();
    ASSERT_GE(sources.size(), 20u);
    for (const auto& [name, src] : sources) {
        auto fn = parse(src);
        EXPECT_EQ(fn.name, name);
        auto once = print(fn);
        EXPECT_EQ(parse(once), fn) << name;
        EXPECT_EQ(print(parse(once)), once) << name;
    }
}

TEST(Analyzer, CorpusIsClean)
{
    auto reg = voyager::testing::corpus_registry();
    for (const auto& [name, src] : voyager::testing::corpus_sources()) {
        auto errors = analyze(parse(src), reg);
        EXPECT_TRUE(errors.empty()) << name << ": " << (errors.empty() ? "" : render(errors.front()));
    }
}

TEST(Analyzer, UnknownCallable)
{
    auto msgs = error_messages("fn f() { craftAcaciaAxe(); }", ApiRegistry::standard());
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_EQ(msgs[0], "unknown callable 'craftAcaciaAxe'");
}

TEST(Analyzer, ArityAndUndefinedVariable)
{
    auto reg = ApiRegistry::standard();
    auto msgs = error_messages("fn f() { mineBlock(); chat(x); }", reg);
    ASSERT_EQ(msgs.size(), 2u);
    EXPECT_EQ(msgs[0], "arity mismatch: 'mineBlock' takes 1 to 2 arguments, got 0");
    EXPECT_EQ(msgs[1], "undefined variable 'x'");
}

TEST(Analyzer, LetIsBlockScoped)
{
    auto msgs = error_messages("fn f() { if true { let a = 1; } chat(\"\" + a); }", ApiRegistry::standard());
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_EQ(msgs[0], "undefined variable 'a'");
}

TEST(Analyzer, ImpurePredicate)
{
    auto msgs = error_messages("fn f() { exploreUntil(\"east\", 60, mineBlock(\"stone\")); }", ApiRegistry::standard());
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_NE(msgs[0].find("stop condition"), std::string::npos);
}

TEST(Analyzer, RecursionCycleThroughLibrary)
{
    auto reg = ApiRegistry::standard();
    reg.add_skill(fn_ptr("fn b() { a(); }"));
    reg.add_skill(fn_ptr("fn a() { chat(\"old\"); }"));
    auto msgs = error_messages("fn a() { b(); }", reg);
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_EQ(msgs[0], "recursion cycle: a -> b -> a");
    EXPECT_EQ(error_messages("fn c() { c(); }", reg), std::vector<std::string>{"recursion cycle: c -> c"});
}

TEST(Analyzer, ValidProgramHasNoErrors)
{
    auto msgs = error_messages(R"(fn f(n = 2) {
        let p = position();
        if inventory_count("dirt") < n { mineBlock("dirt", n); } else { chat("enough"); }
        goto(pos(p.x + 1, p.y, p.z), 1);
    })",
                               ApiRegistry::standard());
    EXPECT_TRUE(msgs.empty());
}

TEST(Analyzer, ApiDocsAreStableAndGrowWithSkills)
{
    auto reg = voyager::testing::corpus_registry();
    auto before = render_api_docs(reg);
    EXPECT_EQ(before, render_api_docs(voyager::testing::corpus_registry()));
    EXPECT_NE(before.find("Control primitives:"), std::string::npos);
    reg.add_skill(fn_ptr("fn zzzNewSkill(count = 2) { chat(\"x\"); }"), "Does nothing useful.");
    auto after = render_api_docs(reg);
    ASSERT_TRUE(after.size() > before.size());
    EXPECT_NE(after.find("zzzNewSkill(count = 2)"), std::string::npos) << after;
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    EXPECT_EQ(lines(after), lines(before) + 1);
}

TEST(Interpreter, WoodToTableToPickaxe)
{
    auto world = voyager::testing::small_world(1, "forest");
    auto reg = ApiRegistry::standard();
    auto out = run_source(R"(fn f() {
        let log = first_nearby("logs");
        if log == "" { exploreUntil("east", 300, first_nearby("logs") != ""); log = first_nearby("logs"); }
        mineBlock(log, 3);
        let planks = replace(log, "_log", "_planks");
        craftItem(planks, 3);
        craftItem("crafting_table", 1);
        placeItem("crafting_table", free_spot());
        craftItem("stick", 1);
        craftItem("wooden_pickaxe", 1);
    })",
                          world, reg);
    ASSERT_FALSE(out.error) << out.error->render();
    EXPECT_EQ(world.inventory_count("wooden_pickaxe"), 1);
    // Placed table is recycled at the end of the program.
    EXPECT_EQ(world.inventory_count("crafting_table"), 1);
    EXPECT_FALSE(world.block_nearby("crafting_table"));
    EXPECT_GE(out.steps_used, 6);
}

TEST(Interpreter, RuntimeErrorHasTrace)
{
    auto world = voyager::testing::small_world();
    auto reg = ApiRegistry::standard();
    reg.add_skill(fn_ptr("fn inner() {\n    craftItem(\"mithril\", 1);\n}"));
    auto out = run_source("fn outer() {\n    chat(\"go\");\n    inner();\n}", world, reg);
    ASSERT_TRUE(out.error);
    EXPECT_EQ(out.error->kind, ErrorKind::runtime);
    ASSERT_EQ(out.error->trace.size(), 2u);
    EXPECT_EQ(out.error->trace[0], "inner (line 2, column 5)");
    EXPECT_EQ(out.error->trace[1], "outer (line 3, column 5)");
    EXPECT_NE(out.error->render().find("no recipe for 'mithril'"), std::string::npos);
}

TEST(Interpreter, SyntaxAndStaticErrorsLeaveWorldUntouched)
{
    auto world = voyager::testing::small_world();
    auto reg = ApiRegistry::standard();
    auto a = run_source("fn f( {", world, reg);
    ASSERT_TRUE(a.error);
    EXPECT_EQ(a.error->kind, ErrorKind::syntax);
    auto b = run_source("fn f() { craftAcaciaAxe(); }", world, reg);
    ASSERT_TRUE(b.error);
    EXPECT_EQ(b.error->kind, ErrorKind::static_check);
    EXPECT_TRUE(world.events().empty());
}

TEST(Interpreter, BudgetExceeded)
{
    auto world = voyager::testing::small_world();
    auto reg = ApiRegistry::standard();
    ExecOptions opt;
    opt.budget = 50;
    auto out = run_source("fn spin() { repeat 1000000000 { chat(\"hi\"); } }", world, reg, opt);
    ASSERT_TRUE(out.error);
    EXPECT_EQ(out.error->kind, ErrorKind::budget_exceeded);
    EXPECT_EQ(out.steps_used, opt.budget);
    EXPECT_EQ(out.primitive_trace.size(), static_cast<std::size_t>(opt.budget));
}

TEST(Interpreter, StatementLimitStopsPureLoops)
{
    auto world = voyager::testing::small_world();
    auto out = run_source("fn spin() { let i = 0; repeat 1000000000 { i = i + 1; } }", world, ApiRegistry::standard());
    ASSERT_TRUE(out.error);
    EXPECT_EQ(out.error->kind, ErrorKind::budget_exceeded);
    EXPECT_EQ(out.steps_used, 0);
}

TEST(Interpreter, SkillCallMatchesInlinedProgram)
{
    auto reg = ApiRegistry::standard();
    reg.add_skill(fn_ptr("fn getDirt(n = 2) { mineBlock(\"dirt\", n); chat(\"got dirt\"); }"));
    auto w1 = voyager::testing::small_world(5, "plains");
    auto w2 = voyager::testing::small_world(5, "plains");
    auto a = run_source("fn f() { getDirt(3); craftItem(\"stick\", 1); }", w1, reg);
    auto b = run_source("fn f() { mineBlock(\"dirt\", 3); chat(\"got dirt\"); craftItem(\"stick\", 1); }", w2, reg);
    EXPECT_EQ(w1.event_log_text(), w2.event_log_text());
    EXPECT_EQ(a.feedback, b.feedback);
    EXPECT_EQ(a.error.has_value(), b.error.has_value());
}

TEST(Interpreter, LazyPredicateIsReevaluated)
{
    auto world = voyager::testing::small_world(1, "plains");
    auto start_x = world.position().x;
    ASSERT_LT(start_x, 30);
    auto out = run_source(R"(fn f() {
        let start = position();
        exploreUntil("east", 200, position().x >= start.x + 5);
    })",
                          world, ApiRegistry::standard());
    ASSERT_FALSE(out.error) << out.error->render();
    EXPECT_EQ(out.end_state.position.x, start_x + 5);
}

TEST(Interpreter, ValueSemanticsAndArithmetic)
{
    auto world = voyager::testing::small_world();
    auto out = run_source(R"(fn f() {
        let a = 7 / 2 + 7 % 2 * 10 - -1;
        if a == 14 && "ab" + "c" == "abc" { chat("ok " + a); } else { chat("bad " + a); }
    })",
                          world, ApiRegistry::standard());
    ASSERT_FALSE(out.error) << out.error->render();
    ASSERT_EQ(out.feedback.size(), 1u);
    EXPECT_EQ(out.feedback[0], "ok 14");
}

TEST(Interpreter, DivisionByZeroIsRuntimeError)
{
    auto world = voyager::testing::small_world();
    auto out = run_source("fn f() { let a = 1 / 0; }", world, ApiRegistry::standard());
    ASSERT_TRUE(out.error);
    EXPECT_EQ(out.error->kind, ErrorKind::runtime);
}

TEST(Interpreter, CorpusChainReachesIronPickaxe)
{
    auto world = craftworld::World::create(craftworld::default_world_config(1));
    auto reg = voyager::testing::corpus_registry();
    for (const char* name : {"mineWoodLog", "craftCraftingTable", "craftWoodenPickaxe", "mineCobblestone",
                             "craftStonePickaxe", "craftFurnace", "mineIronOre", "smeltRawIron",
                             "craftIronPickaxe", "mineDiamond"}) {
        auto out = execute(*reg.skill(name), world, reg);
        EXPECT_FALSE(out.error) << name << ": " << out.error->render();
    }
    EXPECT_EQ(world.inventory_count("iron_pickaxe"), 1);
    EXPECT_GE(world.inventory_count("diamond"), 1);
}

TEST(Interpreter, CraftDiamondPickaxeFromScratch)
{
    auto world = craftworld::World::create(craftworld::default_world_config(2));
    auto reg = voyager::testing::corpus_registry();
    auto out = execute(*reg.skill("craftDiamondPickaxe"), world, reg);
    EXPECT_FALSE(out.error) << out.error->render();
    EXPECT_EQ(world.inventory_count("diamond_pickaxe"), 1);
}

// Property: for random straight-line programs the number of primitive calls never exceeds
// the static bound, and repeat nesting multiplies it.
TEST(InterpreterProperty, StepsWithinStaticBound)
{
    std::mt19937_64 rng(11);
    auto reg = ApiRegistry::standard();
    const std::vector<std::string> prims = {"chat(\"a\");", "mineBlock(\"dirt\", 1);", "craftItem(\"stick\", 1);",
                                            "consume(\"bread\");"};
    for (int trial = 0; trial < 40; ++trial) {
        std::string body;
        std::function<std::string(int)> gen = [&](int depth) {
            std::string s;
            int n = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < n; ++i) {
                auto r = rng() % 4;
                if (r == 0 && depth < 2)
                    s += "repeat " + std::to_string(1 + rng() % 4) + " { " + gen(depth + 1) + " } ";
                else if (r == 1 && depth < 2)
                    s += "if inventory_count(\"dirt\") > 1 { " + gen(depth + 1) + " } else { " + gen(depth + 1) + " } ";
                else
                    s += prims[rng() % prims.size()] + " ";
            }
            return s;
        };
        auto src = "fn g() { " + gen(0) + "}";
        auto fn = parse(src);
        ASSERT_TRUE(analyze(fn, reg).empty()) << src;
        auto world = voyager::testing::small_world(trial + 1, "plains");
        auto out = execute(fn, world, reg);
        EXPECT_LE(out.steps_used, static_call_bound(fn, reg)) << src;
        EXPECT_EQ(parse(print(fn)), fn);
    }
}

TEST(InterpreterProperty, ExecutionIsDeterministic)
{
    auto reg = voyager::testing::corpus_registry();
    for (std::uint64_t seed : {3ULL, 4ULL}) {
        auto w1 = voyager::testing::small_world(seed, "forest");
        auto w2 = voyager::testing::small_world(seed, "forest");
        execute(*reg.skill("craftWoodenPickaxe"), w1, reg);
        execute(*reg.skill("craftWoodenPickaxe"), w2, reg);
        EXPECT_EQ(w1.event_log_text(), w2.event_log_text());
    }
}

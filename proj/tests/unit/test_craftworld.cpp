// SPDX-License-Identifier: Apache-2.0
#include "test_worlds.hpp"

#include "voyager/craftworld/world.hpp"
#include "voyager/util/text.hpp"

#include <gtest/gtest.h>

#include <random>
#include <regex>

using namespace voyager::craftworld;
using voyager::testing::free_spot_near;
using voyager::testing::small_config;
using voyager::testing::small_world;

namespace {

bool never(const World&) { return false; }

std::string joined(const ActionResult& r) { return voyager::util::join(r.feedback, " | "); }

Position spot_with_station(World& world, const std::string& station)
{
    auto p = free_spot_near(world);
    world.set_inventory({{station, 1}});
    EXPECT_TRUE(world.place_item(station, p).ok);
    return p;
}

} // namespace

TEST(Registry, OakLogYieldsFourPlanks)
{
    auto world = small_world();
    world.set_inventory({{"oak_log", 1}});
    auto r = world.craft_item("oak_planks", 1);
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.observe().inventory, (Inventory{{"oak_planks", 4}}));
}

TEST(Registry, VanillaMiningTiers)
{
    // Reference values from the vanilla game, kept separate from data/registry.txt.
    const std::map<std::string, ToolTier> vanilla{
        {"oak_log", ToolTier::none},      {"dirt", ToolTier::none},          {"stone", ToolTier::wooden},
        {"coal_ore", ToolTier::wooden},   {"iron_ore", ToolTier::stone},     {"copper_ore", ToolTier::stone},
        {"lapis_ore", ToolTier::stone},   {"gold_ore", ToolTier::iron},      {"redstone_ore", ToolTier::iron},
        {"diamond_ore", ToolTier::iron},  {"deepslate", ToolTier::wooden},   {"bedrock", ToolTier::unbreakable},
    };
    const auto& reg = *default_registry();
    for (const auto& [block, tier] : vanilla) {
        ASSERT_NE(reg.block(block), nullptr) << block;
        EXPECT_EQ(reg.block(block)->tier, tier) << block;
    }
    EXPECT_EQ(reg.block("iron_ore")->drop, "raw_iron");
    EXPECT_EQ(reg.block("diamond_ore")->drop, "diamond");
    EXPECT_EQ(reg.block("stone")->drop, "cobblestone");
}

TEST(WorldCreate, FreshStateAndDeterminism)
{
    auto a = small_world(7);
    auto b = small_world(7);
    auto s = a.observe();
    EXPECT_TRUE(s.inventory.empty());
    EXPECT_EQ(s.health, 20);
    EXPECT_EQ(s.hunger, 20);
    EXPECT_EQ(s, b.observe());
    EXPECT_EQ(a.tick(), 0);
}

TEST(WorldCreate, SeedsOneAndTwoSpawnInDifferentBiomes)
{
    auto cfg1 = default_world_config(1);
    auto cfg2 = default_world_config(2);
    auto w1 = World::create(cfg1);
    auto w2 = World::create(cfg2);
    EXPECT_NE(w1.observe().biome, w2.observe().biome);
}

TEST(WorldCreate, UnreachableItemIsConfigError)
{
    auto text = voyager::util::read_file(data_path("registry.txt")) + "\ncraft mithril_sword 1 crafting_table mithril:2 stick:1\n";
    auto reg = std::make_shared<const Registry>(Registry::parse(text));
    auto cfg = small_config();
    cfg.registry = reg;
    try {
        World::create(cfg);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("unreachable item"), std::string::npos) << msg;
        EXPECT_NE(msg.find("mithril"), std::string::npos) << msg;
    }
}

TEST(WorldCreate, MalformedOreTableIsConfigError)
{
    auto cfg = small_config();
    cfg.ore_depth_table.push_back({"unobtainium_ore", 0, 10, 1, 1});
    EXPECT_THROW(World::create(cfg), ConfigError);
}

TEST(TechTree, EveryTierNeedsThePreviousPickaxe)
{
    auto cfg = small_config();
    auto none = reachable_items(cfg, ToolTier::none);
    auto wooden = reachable_items(cfg, ToolTier::wooden);
    auto stone = reachable_items(cfg, ToolTier::stone);
    auto iron = reachable_items(cfg, ToolTier::iron);
    EXPECT_TRUE(none.count("wooden_pickaxe"));
    EXPECT_FALSE(none.count("cobblestone"));
    EXPECT_FALSE(none.count("stone_pickaxe"));
    EXPECT_TRUE(wooden.count("stone_pickaxe"));
    EXPECT_FALSE(wooden.count("raw_iron"));
    EXPECT_FALSE(wooden.count("iron_pickaxe"));
    EXPECT_TRUE(stone.count("iron_pickaxe"));
    EXPECT_FALSE(stone.count("diamond"));
    EXPECT_TRUE(iron.count("diamond"));
    EXPECT_TRUE(iron.count("diamond_pickaxe"));
}

TEST(Craft, FeedbackTemplatesMatchExactly)
{
    auto world = small_world();
    spot_with_station(world, "crafting_table");
    world.set_inventory({{"iron_ingot", 1}});
    auto r = world.craft_item("iron_chestplate");
    EXPECT_FALSE(r.ok);
    ASSERT_EQ(r.feedback.size(), 1u);
    EXPECT_EQ(r.feedback[0], "I cannot make an iron chestplate because I need: 7 more iron ingots");
    EXPECT_EQ(world.observe().inventory, (Inventory{{"iron_ingot", 1}}));

    world.set_inventory({});
    r = world.craft_item("stick");
    ASSERT_EQ(r.feedback.size(), 1u);
    EXPECT_EQ(r.feedback[0], "I cannot make 4 sticks because I need: 2 more planks");
}

TEST(Craft, HallucinatedItemIsExecutionError)
{
    auto world = small_world();
    auto r = world.craft_item("acacia_axe_of_doom");
    ASSERT_TRUE(r.error);
    EXPECT_NE(r.error->find("no recipe"), std::string::npos);
    EXPECT_EQ(world.craft_item("stick", 0).error.has_value(), true);
}

TEST(Craft, NeedsTableThenSucceeds)
{
    auto world = small_world();
    world.set_inventory({{"oak_planks", 3}, {"stick", 2}});
    auto r = world.craft_item("wooden_pickaxe");
    EXPECT_FALSE(r.ok);
    EXPECT_NE(joined(r).find("no crafting table nearby"), std::string::npos);
    world.set_inventory({{"oak_planks", 3}, {"stick", 2}, {"crafting_table", 1}});
    ASSERT_TRUE(world.place_item("crafting_table", free_spot_near(world)).ok);
    r = world.craft_item("wooden_pickaxe");
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.observe().inventory, (Inventory{{"wooden_pickaxe", 1}}));
}

TEST(Mine, OakLogsInForest)
{
    auto world = small_world();
    auto r = world.mine_block("oak_log", 3);
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.inventory_count("oak_log"), 3);
}

TEST(Mine, PreconditionsAndUnknownBlock)
{
    auto world = small_world();
    EXPECT_TRUE(world.mine_block("oak_log", 0).error);
    auto r = world.mine_block("adamantium");
    ASSERT_TRUE(r.error);
    EXPECT_NE(r.error->find("unknown block"), std::string::npos);
}

TEST(Mine, DiamondNeedsIronPickaxe)
{
    auto world = small_world();
    auto p = world.position() + Position{1, -1, 0};
    world.set_block(p, "diamond_ore");
    world.set_inventory({{"stone_pickaxe", 1}});
    auto r = world.mine_block("diamond_ore", 1);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.error);
    EXPECT_EQ(joined(r), "I cannot mine diamond ore because I need at least an iron pickaxe");
    EXPECT_EQ(world.block_at(p), "diamond_ore");
    world.set_inventory({{"stone_pickaxe", 1}, {"iron_pickaxe", 1}});
    r = world.mine_block("diamond_ore", 1);
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.inventory_count("diamond"), 1);
    EXPECT_EQ(world.block_at(p), "air");
}

TEST(Mine, MissingBlockAsksToExplore)
{
    auto world = small_world();
    auto r = world.mine_block("diamond_ore", 1);
    EXPECT_EQ(joined(r), "No diamond ore nearby, please explore first");
}

TEST(Smelt, IronWithCoal)
{
    auto world = small_world();
    spot_with_station(world, "furnace");
    world.set_inventory({{"raw_iron", 3}, {"coal", 2}});
    auto r = world.smelt_item("raw_iron", "coal", 3);
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.observe().inventory, (Inventory{{"coal", 1}, {"iron_ingot", 3}}));
}

TEST(Smelt, InvalidFuelAndShortfall)
{
    auto world = small_world();
    spot_with_station(world, "furnace");
    world.set_inventory({{"raw_iron", 1}, {"cobblestone", 5}});
    auto r = world.smelt_item("raw_iron", "cobblestone", 1);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(joined(r), "cobblestone is not a valid fuel; valid fuels are coal, charcoal, logs, planks, stick");
    EXPECT_EQ(world.observe().inventory, (Inventory{{"cobblestone", 5}, {"raw_iron", 1}}));

    world.set_inventory({{"coal", 4}});
    r = world.smelt_item("raw_iron", "coal", 1);
    EXPECT_EQ(joined(r), "I cannot make an iron ingot because I need: 1 more raw iron");
    EXPECT_EQ(world.inventory_count("coal"), 4);
}

TEST(Smelt, NeedsFurnace)
{
    auto world = small_world();
    world.set_inventory({{"raw_iron", 1}, {"coal", 1}});
    auto r = world.smelt_item("raw_iron", "coal", 1);
    EXPECT_NE(joined(r).find("no furnace nearby"), std::string::npos);
}

TEST(Place, OccupiedAndMissing)
{
    auto world = small_world();
    auto ground = world.position() - Position{0, 1, 0};
    world.set_inventory({{"dirt", 2}});
    auto r = world.place_item("dirt", ground);
    EXPECT_NE(joined(r).find("position occupied"), std::string::npos);
    EXPECT_EQ(world.inventory_count("dirt"), 2);
    world.set_inventory({});
    r = world.place_item("dirt", free_spot_near(world));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(joined(r), "I have no dirt to place");
    world.set_inventory({{"stick", 1}});
    EXPECT_TRUE(world.place_item("stick", free_spot_near(world)).error);
}

TEST(Combat, SheepDropsMuttonAndWool)
{
    auto cfg = small_config(3, "plains");
    cfg.mob_spawn_table["plains"] = {{"sheep", 1}};
    auto world = World::create(cfg);
    ASSERT_TRUE(world.entity_nearby("sheep"));
    auto r = world.kill_mob("sheep");
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.observe().inventory, (Inventory{{"mutton", 1}, {"white_wool", 1}}));
}

TEST(Combat, AbsentMobLeavesStateAlone)
{
    auto world = small_world();
    auto before = world.observe();
    auto r = world.kill_mob("ender_dragon");
    EXPECT_EQ(joined(r), "No ender dragon nearby");
    auto after = world.observe();
    EXPECT_EQ(after.inventory, before.inventory);
    EXPECT_EQ(after.health, before.health);
}

TEST(Combat, DeathRespawnsWithInventory)
{
    auto cfg = small_config(3, "plains");
    cfg.mob_spawn_table["plains"] = {{"zombie", 1}};
    auto world = World::create(cfg);
    ASSERT_TRUE(world.entity_nearby("zombie"));
    world.set_inventory({{"dirt", 3}});
    world.set_health(2);
    auto r = world.kill_mob("zombie");
    EXPECT_FALSE(r.ok);
    EXPECT_NE(joined(r).find("Respawned"), std::string::npos);
    auto s = world.observe();
    EXPECT_EQ(s.health, 20);
    EXPECT_EQ(s.inventory, (Inventory{{"dirt", 3}}));
}

TEST(Explore, NeverTrueStopsAfterMaxTicks)
{
    auto world = small_world();
    auto start = world.position();
    auto r = world.explore_until(*Direction::parse("east"), 10, never);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.error);
    EXPECT_EQ(world.position().x, start.x + 10);
    EXPECT_EQ(world.position().z, start.z);
}

TEST(Explore, TrueAtStartDoesNotMove)
{
    auto world = small_world();
    auto start = world.position();
    auto r = world.explore_until(*Direction::parse("north"), 1, [](const World&) { return true; });
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(world.position(), start);
}

TEST(Explore, StopsWhereStraightWalkOracleFirstSeesTarget)
{
    auto world = small_world(5, "forest");
    auto start = world.position();
    int dir = start.x < 0 ? 1 : -1;
    Position target{start.x + dir * 40, world.top_solid_y(start.x + dir * 40, start.z) + 1, start.z};
    world.set_block(target, "pumpkin");
    // Oracle: walk the same straight line and measure distance to the only pumpkin.
    const long long r2 = 32 * 32;
    int expected = -1;
    for (int k = 0; k <= 40; ++k) {
        Position p{start.x + dir * k, world.top_solid_y(start.x + dir * k, start.z) + 1, start.z};
        if (distance_squared(p, target) <= r2) {
            expected = k;
            break;
        }
    }
    ASSERT_GE(expected, 0);
    auto r = world.explore_until(*Direction::parse(dir > 0 ? "east" : "west"), 60,
                                 [](const World& w) { return w.block_nearby("pumpkin"); });
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(std::abs(world.position().x - start.x), expected);
}

TEST(GoTo, AlreadyThereAndOpenAir)
{
    auto cfg = small_config();
    cfg.half_extent = 112;
    auto world = World::create(cfg);
    auto start = world.position();
    EXPECT_TRUE(world.go_to(start, 1).ok);
    EXPECT_EQ(world.position(), start);

    // Everything but bedrock is passable, so the path is the Chebyshev line.
    int dir = start.x < 0 ? 1 : -1;
    Position goal{start.x + dir * 100, 76, start.z};
    auto before = world.trajectory().size();
    auto r = world.go_to(goal, 0);
    EXPECT_TRUE(r.ok) << joined(r);
    EXPECT_EQ(world.position(), goal);
    auto d = goal - start;
    auto cheb = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    EXPECT_EQ(world.trajectory().size() - before, static_cast<std::size_t>(cheb));
}

TEST(GoTo, BedrockIsUnreachable)
{
    auto world = small_world();
    auto p = world.position();
    auto r = world.go_to({p.x, -64, p.z}, 0);
    EXPECT_FALSE(r.ok);
    EXPECT_NE(joined(r).find("cannot reach"), std::string::npos);
    EXPECT_EQ(world.position().y, -63);
}

TEST(Chest, DepositGetAndUnknown)
{
    auto cfg = small_config();
    auto probe = World::create(cfg);
    auto sp = probe.position();
    cfg.chests.push_back({sp.x + 3, std::nullopt, sp.z, {{"dirt", 5}}});
    auto world = World::create(cfg);
    auto s = world.observe();
    ASSERT_EQ(s.known_chests.size(), 1u);
    auto chest_pos = s.known_chests.begin()->first;
    EXPECT_FALSE(s.known_chests.begin()->second.has_value());

    auto r = world.chest_transfer(chest_pos, {{"dirt", 10}}, TransferDirection::get);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(world.inventory_count("dirt"), 5);
    EXPECT_NE(joined(r).find("only got 5"), std::string::npos);
    s = world.observe();
    ASSERT_TRUE(s.known_chests.at(chest_pos).has_value());
    EXPECT_TRUE(s.known_chests.at(chest_pos)->empty());

    r = world.chest_transfer(chest_pos, {{"dirt", 5}}, TransferDirection::deposit);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(world.observe().known_chests.at(chest_pos), (Inventory{{"dirt", 5}}));
    EXPECT_EQ(world.inventory_count("dirt"), 0);

    EXPECT_TRUE(world.chest_transfer(chest_pos + Position{0, 5, 0}, {{"dirt", 1}}, TransferDirection::get).error);
}

TEST(Death, RespawnAtSurfaceWithInventory)
{
    auto world = small_world();
    Inventory stacks;
    const char* items[] = {"dirt", "stick", "coal", "oak_log", "oak_planks", "cobblestone", "raw_iron", "iron_ingot",
                           "diamond", "torch", "furnace", "crafting_table", "wooden_pickaxe", "stone_pickaxe",
                           "iron_pickaxe", "sand", "gravel"};
    for (int i = 0; i < 17; ++i)
        stacks[items[i]] = i + 1;
    world.set_inventory(stacks);
    world.set_position({10, -40, 10});
    world.set_health(0);
    auto r = world.apply_death();
    EXPECT_TRUE(r.ok);
    auto s = world.observe();
    EXPECT_EQ(s.inventory, stacks);
    EXPECT_EQ(s.position, (Position{10, world.top_solid_y(10, 10) + 1, 10}));
    EXPECT_EQ(s.health, 20);
    EXPECT_EQ(s.hunger, 20);

    world.set_position({10, -40, 10});
    world.set_health(0);
    world.apply_death();
    EXPECT_EQ(world.position(), s.position);

    EXPECT_TRUE(world.apply_death().error);
}

TEST(Recycle, PlacedStationsReturn)
{
    auto world = small_world();
    world.begin_program();
    world.set_inventory({{"crafting_table", 1}, {"furnace", 1}});
    auto a = free_spot_near(world, 2);
    ASSERT_TRUE(world.place_item("crafting_table", a).ok);
    auto b = free_spot_near(world, 4);
    ASSERT_TRUE(world.place_item("furnace", b).ok);
    EXPECT_TRUE(world.observe().inventory.empty());
    world.recycle_stations();
    EXPECT_EQ(world.observe().inventory, (Inventory{{"crafting_table", 1}, {"furnace", 1}}));
    EXPECT_EQ(world.block_at(a), "air");
    EXPECT_EQ(world.block_at(b), "air");
    auto before = world.observe();
    world.recycle_stations();
    EXPECT_EQ(world.observe().inventory, before.inventory);
}

TEST(Observe, RecentlySeenPartition)
{
    auto world = small_world();
    auto target = free_spot_near(world, 1);
    world.set_block(target, "pumpkin");
    world.set_position(world.position());
    auto p = world.position();
    int dir = p.x < 0 ? 1 : -1;
    world.go_to({p.x + dir * 40, 76, p.z}, 0);
    auto s = world.observe();
    EXPECT_FALSE(s.nearby_blocks.count("pumpkin"));
    EXPECT_TRUE(s.recently_seen_blocks.count("pumpkin"));
    for (const auto& b : s.recently_seen_blocks) {
        EXPECT_FALSE(s.nearby_blocks.count(b)) << b;
        EXPECT_FALSE(s.inventory.count(b)) << b;
    }
}

TEST(Time, TicksAndHunger)
{
    auto world = small_world();
    for (int i = 0; i < 50; ++i)
        world.chat("hi");
    EXPECT_EQ(world.tick(), 50 * 20);
    EXPECT_EQ(world.observe().hunger, 19);
    EXPECT_EQ(world.events().size(), 50u);
    EXPECT_EQ(world.observe().time_of_day, TimeOfDay::day);
}

TEST(EventLog, OneJsonLinePerCall)
{
    auto world = small_world();
    world.mine_block("oak_log", 1);
    world.craft_item("oak_planks", 1);
    auto lines = voyager::util::split(world.event_log_text(), '\n', true);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_NE(lines[0].find("\"op\":\"mineBlock\""), std::string::npos);
    EXPECT_NE(lines[0].find("\"new_items\":[\"oak_log\"]"), std::string::npos);
}

// ---- property tests -----------------------------------------------------------------

namespace {

/// Applies a random primitive chosen from a small menu; returns a label for diagnostics.
std::string random_action(World& world, std::mt19937_64& rng, bool conserving_only)
{
    static const char* blocks[] = {"oak_log", "dirt", "grass_block", "stone", "coal_ore", "oak_leaves", "sand"};
    static const char* recipes[] = {"oak_planks", "stick", "crafting_table", "wooden_pickaxe", "torch"};
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    int menu = conserving_only ? 3 : 6;
    switch (pick(menu)) {
    case 0: {
        auto b = blocks[pick(7)];
        world.mine_block(b, 1 + pick(3));
        return std::string("mine ") + b;
    }
    case 1: {
        static const char* dirs[] = {"east", "west", "north", "south", "northeast", "southwest"};
        world.explore_until(*Direction::parse(dirs[pick(6)]), 1 + pick(8), never);
        return "explore";
    }
    case 2: {
        auto p = world.position();
        world.go_to({p.x + pick(9) - 4, p.y + pick(5) - 2, p.z + pick(9) - 4}, pick(2));
        return "goto";
    }
    case 3: {
        auto r = recipes[pick(5)];
        world.craft_item(r, 1 + pick(2));
        return std::string("craft ") + r;
    }
    case 4:
        world.place_item("crafting_table", free_spot_near(world, 1 + pick(3)));
        return "place";
    default:
        world.kill_mob("sheep");
        return "kill";
    }
}

} // namespace

TEST(Property, SameActionsSameEventLog)
{
    for (std::uint64_t trial = 0; trial < 4; ++trial) {
        auto a = small_world(11 + trial);
        auto b = small_world(11 + trial);
        std::mt19937_64 ra(trial);
        std::mt19937_64 rb(trial);
        for (int i = 0; i < 25; ++i) {
            random_action(a, ra, false);
            random_action(b, rb, false);
        }
        EXPECT_EQ(a.event_log_text(), b.event_log_text());
        EXPECT_EQ(a.observe(), b.observe());
    }
}

TEST(Property, MiningAndMovingConserveItems)
{
    for (std::uint64_t trial = 0; trial < 4; ++trial) {
        auto world = small_world(21 + trial);
        auto before = world.item_ledger();
        std::mt19937_64 rng(trial);
        for (int i = 0; i < 20; ++i) {
            auto label = random_action(world, rng, true);
            ASSERT_EQ(world.item_ledger(), before) << "after " << label << " in trial " << trial;
        }
    }
}

TEST(Property, StateStaysInRange)
{
    auto world = small_world(31);
    world.set_inventory({{"oak_log", 6}});
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        random_action(world, rng, false);
        auto s = world.observe();
        EXPECT_LE(s.health, 20);
        EXPECT_LE(s.hunger, 20);
        EXPECT_GE(s.health, 0);
        for (const auto& [item, n] : s.inventory)
            EXPECT_GT(n, 0) << item;
    }
}

TEST(Property, ShortfallMessagesParseBack)
{
    const std::regex shape(R"(I cannot make (.+) because I need: (.+))");
    const std::regex part(R"((\d+) more (.+))");
    auto world = small_world();
    spot_with_station(world, "crafting_table");
    const auto& reg = world.registry();
    std::mt19937_64 rng(5);
    int checked = 0;
    for (const auto& [name, recipe] : reg.recipes()) {
        Inventory inv;
        for (const auto& ing : recipe.inputs) {
            auto item = ing.is_tag ? reg.tag_members(ing.name).front() : ing.name;
            inv[item] = static_cast<int>(rng() % static_cast<std::uint64_t>(ing.count + 1)) - 0;
        }
        world.set_inventory(inv);
        auto r = world.craft_item(name);
        if (r.ok || r.feedback.empty())
            continue;
        std::smatch m;
        ASSERT_TRUE(std::regex_match(r.feedback[0], m, shape)) << r.feedback[0];
        for (const auto& piece : voyager::util::split(m[2].str(), ',')) {
            std::smatch pm;
            auto text = std::string(voyager::util::trim(piece));
            ASSERT_TRUE(std::regex_match(text, pm, part)) << text;
            int n = std::stoi(pm[1].str());
            bool matched = false;
            for (const auto& ing : recipe.inputs) {
                int have = 0;
                for (const auto& [item, c] : inv)
                    if (reg.matches(ing, item))
                        have += c;
                if (reg.ingredient_name(ing, n) == pm[2].str()) {
                    EXPECT_EQ(n, ing.count - have);
                    matched = true;
                }
            }
            EXPECT_TRUE(matched) << text;
            EXPECT_GT(n, 0);
        }
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

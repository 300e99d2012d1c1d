// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voyager::craftworld {

/// Raised for malformed or inconsistent world data (registry or world config).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ToolTier : std::uint8_t { none, wooden, stone, iron, diamond, unbreakable };

std::string_view to_string(ToolTier tier);
ToolTier parse_tool_tier(std::string_view text);

enum class Station : std::uint8_t { none, crafting_table, furnace };

std::string_view to_string(Station station);

/// A recipe input: either a concrete item or a `#tag` standing for any member.
struct Ingredient {
    std::string name;
    bool is_tag = false;
    int count = 1;

    friend bool operator==(const Ingredient&, const Ingredient&) = default;
};

struct Recipe {
    std::string output;
    int output_count = 1;
    std::vector<Ingredient> inputs;
    Station station = Station::none;
};

struct BlockInfo {
    std::string name;
    std::string drop;       // empty: drops nothing
    int drop_count = 1;
    ToolTier tier = ToolTier::none;
    bool replaceable = false; // air, flora: can be placed into / walked through
};

struct MobInfo {
    std::string name;
    int hp = 10;
    int damage = 0;
    std::vector<std::pair<std::string, int>> drops;
};

struct BiomeInfo {
    std::string name;
    std::string surface = "grass_block";
    std::string subsurface = "dirt";
    std::string tree_log;    // empty: treeless
    std::string tree_leaves;
    int tree_density = 0;    // trees per 16x16 columns
    std::vector<std::pair<std::string, int>> flora; // block, per-mille of surface columns
};

struct Fuel {
    Ingredient source; // count unused
    int burn_ticks = 0;
};

/// Static game data: blocks, recipes, smelting, fuels, tools, mobs, biomes.
///
/// Loaded from the line-oriented text format documented in docs/data-format.md.
class Registry {
public:
    static Registry parse(std::string_view text);
    static Registry load(const std::string& path);

    const BlockInfo* block(std::string_view name) const;
    const MobInfo* mob(std::string_view name) const;
    const BiomeInfo* biome(std::string_view name) const;
    const Recipe* recipe(std::string_view output) const;
    const Recipe* smelting(std::string_view input) const;

    /// Block ids are dense indices used by the world grid; id 0 is always air.
    std::uint8_t block_id(std::string_view name) const;
    const BlockInfo& block_by_id(std::uint8_t id) const { return blocks_[id]; }
    std::size_t block_count() const { return blocks_.size(); }

    bool tag_contains(std::string_view tag, std::string_view item) const;
    const std::vector<std::string>& tag_members(std::string_view tag) const;
    bool matches(const Ingredient& ingredient, std::string_view item) const;

    std::optional<int> fuel_burn_ticks(std::string_view item) const;
    const std::vector<Fuel>& fuels() const { return fuels_; }
    int smelt_ticks() const { return smelt_ticks_; }

    /// Pickaxe tier provided by `item`, if it is a pickaxe.
    std::optional<ToolTier> pickaxe_tier(std::string_view item) const;
    int weapon_damage(std::string_view item) const; // bare hand when not a weapon
    int armor_points(std::string_view item) const;
    std::optional<std::string> armor_slot(std::string_view item) const;
    std::optional<int> food_value(std::string_view item) const;

    /// Human-readable names used in feedback ("iron_ingot" -> "iron ingot").
    std::string display_name(std::string_view item) const;
    std::string plural_name(std::string_view item) const;
    std::string ingredient_name(const Ingredient& ing, int count) const;

    const std::map<std::string, Recipe, std::less<>>& recipes() const { return recipes_; }
    const std::map<std::string, Recipe, std::less<>>& smelting_recipes() const { return smelting_; }
    const std::vector<BlockInfo>& blocks() const { return blocks_; }
    const std::map<std::string, MobInfo, std::less<>>& mobs() const { return mobs_; }
    const std::map<std::string, BiomeInfo, std::less<>>& biomes() const { return biomes_; }

    /// Every item name mentioned anywhere in the data.
    std::set<std::string> all_items() const;

private:
    std::vector<BlockInfo> blocks_;
    std::map<std::string, std::uint8_t, std::less<>> block_ids_;
    std::map<std::string, Recipe, std::less<>> recipes_;
    std::map<std::string, Recipe, std::less<>> smelting_; // keyed by input item
    std::map<std::string, std::vector<std::string>, std::less<>> tags_;
    std::map<std::string, std::string, std::less<>> tag_display_;
    std::vector<Fuel> fuels_;
    int smelt_ticks_ = 200;
    std::map<std::string, ToolTier, std::less<>> pickaxes_;
    std::map<std::string, int, std::less<>> weapons_;
    std::map<std::string, std::pair<std::string, int>, std::less<>> armor_;
    std::map<std::string, int, std::less<>> foods_;
    std::map<std::string, MobInfo, std::less<>> mobs_;
    std::map<std::string, BiomeInfo, std::less<>> biomes_;
    std::map<std::string, std::string, std::less<>> plurals_;
};

/// Directory holding the bundled data files (registry, world config, prompts, corpus).
std::string data_dir();
std::string data_path(std::string_view relative);

std::shared_ptr<const Registry> default_registry();

} // namespace voyager::craftworld

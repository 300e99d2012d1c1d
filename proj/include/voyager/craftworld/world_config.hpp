// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/registry.hpp"
#include "voyager/craftworld/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace voyager::craftworld {

struct OreBand {
    std::string block;
    int min_y = 0;
    int max_y = 0;
    int abundance = 1; // placements per 32x32 column neighborhood
    int cluster = 1;   // blocks per placement
};

struct MobSpawn {
    std::string mob;
    int weight = 1;
};

struct ChestSeed {
    int x = 0;
    std::optional<int> y; // empty: on the surface
    int z = 0;
    Inventory contents;
};

/// Everything needed to generate a world. Two worlds built from equal configs are identical.
struct WorldConfig {
    std::uint64_t seed = 1;
    std::map<std::pair<int, int>, std::string> biome_layout; // region (rx, rz) -> biome override
    std::vector<std::string> biome_pool;                     // fallback biome choice per region
    int region_size = 48;
    std::vector<OreBand> ore_depth_table;
    /// biome -> weighted mobs; the key "night" lists extra spawns at night/midnight.
    std::map<std::string, std::vector<MobSpawn>> mob_spawn_table;
    int day_length_ticks = 24000;

    int half_extent = 128;
    int min_y = -64;
    int max_y = 80;
    int base_height = 64;
    int sensing_radius = 32;
    int ticks_per_call = 20;
    int hunger_decay_calls = 50;
    int goto_step_budget = 600;
    std::vector<ChestSeed> chests;

    std::shared_ptr<const Registry> registry;

    static WorldConfig parse(std::string_view text, std::shared_ptr<const Registry> registry);
    static WorldConfig load(const std::string& path, std::shared_ptr<const Registry> registry);

    /// Throws ConfigError naming the offending entry.
    void validate() const;

    /// Biomes that can occur anywhere in the world.
    std::set<std::string> possible_biomes() const;
    /// Blocks the generator can emit.
    std::set<std::string> generated_blocks() const;
    /// Mobs that can spawn.
    std::set<std::string> spawnable_mobs() const;
};

/// The bundled data/world.conf with its seed replaced.
WorldConfig default_world_config(std::uint64_t seed = 1);

/// Fixpoint over mining, mob drops, crafting and smelting. Pickaxes above
/// `tier_cap` are treated as unusable, which lets callers prove tech-tree gating.
std::set<std::string> reachable_items(const WorldConfig& config, ToolTier tier_cap = ToolTier::diamond);

} // namespace voyager::craftworld

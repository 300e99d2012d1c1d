// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/types.hpp"
#include "voyager/craftworld/world_config.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace voyager::craftworld {

/// Horizontal walking direction, one of the 8 compass steps.
struct Direction {
    int dx = 1;
    int dz = 0;

    static std::optional<Direction> parse(std::string_view name);
    std::string name() const;
};

enum class TransferDirection { get, deposit };

struct Entity {
    std::uint64_t id = 0;
    std::string name;
    Position position;
};

/// Deterministic voxel world with the agent's control primitives.
///
/// The grid is materialized at creation; every primitive mutates it in place and appends
/// exactly one EventRecord. A World is a value: copying it forks the simulation.
class World {
public:
    /// Validates the config (throws ConfigError) and generates terrain, ores, trees and flora.
    static World create(WorldConfig config);

    AgentState observe() const;

    // Control primitives. Each advances time and appends one event.
    ActionResult mine_block(std::string_view name, int count = 1);
    ActionResult craft_item(std::string_view name, int count = 1);
    ActionResult smelt_item(std::string_view item, std::string_view fuel, int count = 1);
    ActionResult place_item(std::string_view name, Position position);
    ActionResult kill_mob(std::string_view mob, int timeout_ticks = 300);
    ActionResult explore_until(Direction direction, int max_ticks, const std::function<bool(const World&)>& stop);
    ActionResult go_to(Position goal, int range);
    ActionResult chest_transfer(Position chest, const Inventory& items, TransferDirection direction);
    ActionResult equip(std::string_view item, EquipSlot slot);
    ActionResult consume(std::string_view item);
    ActionResult chat(std::string_view message);

    /// Respawn at the surface of the death column with inventory kept. Requires health == 0.
    ActionResult apply_death();
    /// Pick up every crafting table / furnace placed since begin_program().
    ActionResult recycle_stations();
    void begin_program();

    // Sensing queries, all within the sensing radius of the agent.
    bool block_nearby(std::string_view name) const;
    bool entity_nearby(std::string_view name) const;
    int inventory_count(std::string_view item) const;
    std::vector<Entity> nearby_entities() const;

    std::string block_at(Position p) const;
    bool in_bounds(Position p) const;
    /// y of the highest non-replaceable block in the column.
    int top_solid_y(int x, int z) const;
    std::string biome_at(int x, int z) const;

    const Position& position() const { return agent_.position; }
    long long tick() const { return tick_; }
    const WorldConfig& config() const { return config_; }
    const Registry& registry() const { return *config_.registry; }
    const std::vector<EventRecord>& events() const { return events_; }
    std::string event_log_text() const;
    const std::vector<Position>& trajectory() const { return trajectory_; }
    const std::set<std::string>& ever_held() const { return ever_held_; }
    std::map<Position, Inventory> chests() const { return chests_; }

    /// Item totals across inventory, chests and the minable stock of the grid (block drops).
    std::map<std::string, long long> item_ledger() const;

    // Direct state edits for tests and protocols (zero-shot resets); they do not log events.
    void set_inventory(Inventory inventory);
    void set_health(int health);
    void set_hunger(int hunger);
    void set_position(Position p);
    void set_block(Position p, std::string_view name);

private:
    struct AgentCore {
        Inventory inventory;
        std::map<EquipSlot, std::string> equipment;
        int health = 20;
        int hunger = 20;
        Position position;
    };
    struct Snapshot {
        Inventory inventory;
        Position position;
        int health = 0;
        int hunger = 0;
    };

    explicit World(WorldConfig config);

    void generate();
    std::size_t index(Position p) const;
    std::uint8_t id_at(Position p) const;
    void set_id(Position p, std::uint8_t id);
    int terrain_height(int x, int z) const;
    Position spawn_point() const;
    Position surface_above(int x, int z) const;

    template <typename F>
    void scan_sphere(Position center, F&& visit) const;
    std::vector<Position> nearest_blocks(std::uint8_t id, int limit) const;
    bool station_nearby(std::string_view name) const;
    std::set<std::string> sense_blocks() const;
    void resense();

    ActionResult begin_result(std::string op, std::vector<std::string> args);
    ActionResult finish(ActionResult result);
    void advance(int ticks);
    void credit(const std::string& item, int count);
    void debit(const std::string& item, int count);
    int count_matching(const Ingredient& ing) const;
    void debit_matching(const Ingredient& ing, int count);
    std::string item_phrase(std::string_view item, int count) const;
    void auto_equip_pickaxe();
    void auto_equip_weapon();
    void prune_equipment();
    bool step_to(Position next);
    void die(std::vector<std::string>& feedback, std::string_view cause);

    WorldConfig config_;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> grid_;
    std::uint8_t air_ = 0;
    std::uint8_t bedrock_ = 0;
    std::uint8_t chest_ = 0;

    AgentCore agent_;
    long long tick_ = 0;
    long long calls_ = 0;
    std::set<std::string> seen_blocks_;
    std::set<Position> seen_chests_;
    std::set<Position> opened_chests_;
    std::map<Position, Inventory> chests_;
    std::set<std::uint64_t> killed_;
    std::vector<Position> placed_stations_;
    std::set<std::string> ever_held_;

    std::vector<EventRecord> events_;
    std::vector<Position> trajectory_;

    // Pending event bookkeeping between begin_result() and finish().
    std::string pending_op_;
    std::vector<std::string> pending_args_;
    Snapshot before_;
};

} // namespace voyager::craftworld

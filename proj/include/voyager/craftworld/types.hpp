// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace voyager::craftworld {

struct Position {
    int x = 0;
    int y = 0;
    int z = 0;

    friend auto operator<=>(const Position&, const Position&) = default;
    friend Position operator+(Position a, Position b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Position operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

std::string to_string(const Position& p);
long long distance_squared(const Position& a, const Position& b);

using Inventory = std::map<std::string, int>;

enum class TimeOfDay { sunrise, day, noon, sunset, night, midnight };
std::string_view to_string(TimeOfDay t);

enum class EquipSlot { hand, head, torso, legs, feet, off_hand };
inline constexpr std::array<EquipSlot, 6> all_equip_slots{EquipSlot::hand, EquipSlot::head, EquipSlot::torso,
                                                           EquipSlot::legs, EquipSlot::feet, EquipSlot::off_hand};
std::string_view to_string(EquipSlot s);
std::optional<EquipSlot> parse_equip_slot(std::string_view text);

/// Full observation of the agent, unfiltered.
struct AgentState {
    Inventory inventory;
    std::map<EquipSlot, std::string> equipment;
    std::set<std::string> nearby_blocks;
    std::set<std::string> recently_seen_blocks;
    std::set<std::string> nearby_entities;
    std::map<Position, std::optional<Inventory>> known_chests; // nullopt: never opened ("Unknown")
    std::string biome;
    TimeOfDay time_of_day = TimeOfDay::sunrise;
    int health = 20;
    int hunger = 20;
    Position position;

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Result of one primitive call. `error` is an execution error (a program bug such as an
/// unknown block); everything else the primitive wants the agent to know goes to `feedback`.
struct ActionResult {
    bool ok = false;
    std::vector<std::string> feedback;
    std::optional<std::string> error;

    static ActionResult success(std::vector<std::string> feedback = {})
    {
        return {true, std::move(feedback), std::nullopt};
    }
    static ActionResult failure(std::string message) { return {false, {std::move(message)}, std::nullopt}; }
    static ActionResult fault(std::string message) { return {false, {}, std::move(message)}; }
};

/// One line of the world's append-only event log.
struct EventRecord {
    long long tick = 0;
    std::string op;
    std::vector<std::string> args;
    std::vector<std::string> feedback;
    std::string error;
    std::vector<std::string> new_items; // items held for the first time after this call
    std::string digest;                 // digest of the state delta

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

std::string to_json_line(const EventRecord& record);

} // namespace voyager::craftworld

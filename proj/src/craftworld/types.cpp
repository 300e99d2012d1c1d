// SPDX-License-Identifier: Apache-2.0
#include "voyager/craftworld/types.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace voyager::craftworld {

std::string to_string(const Position& p) { return fmt::format("({}, {}, {})", p.x, p.y, p.z); }

long long distance_squared(const Position& a, const Position& b)
{
    long long dx = a.x - b.x;
    long long dy = a.y - b.y;
    long long dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

std::string_view to_string(TimeOfDay t)
{
    switch (t) {
    case TimeOfDay::sunrise: return "sunrise";
    case TimeOfDay::day: return "day";
    case TimeOfDay::noon: return "noon";
    case TimeOfDay::sunset: return "sunset";
    case TimeOfDay::night: return "night";
    case TimeOfDay::midnight: return "midnight";
    }
    return "day";
}

std::string_view to_string(EquipSlot s)
{
    switch (s) {
    case EquipSlot::hand: return "hand";
    case EquipSlot::head: return "head";
    case EquipSlot::torso: return "torso";
    case EquipSlot::legs: return "legs";
    case EquipSlot::feet: return "feet";
    case EquipSlot::off_hand: return "off-hand";
    }
    return "hand";
}

std::optional<EquipSlot> parse_equip_slot(std::string_view text)
{
    for (auto s : all_equip_slots)
        if (to_string(s) == text)
            return s;
    if (text == "off_hand")
        return EquipSlot::off_hand;
    return std::nullopt;
}

std::string to_json_line(const EventRecord& record)
{
    nlohmann::json j{
        {"tick", record.tick},       {"op", record.op},
        {"args", record.args},       {"feedback", record.feedback},
        {"error", record.error},     {"new_items", record.new_items},
        {"digest", record.digest},
    };
    return j.dump();
}

} // namespace voyager::craftworld

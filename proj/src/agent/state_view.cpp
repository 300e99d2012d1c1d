// SPDX-License-Identifier: Apache-2.0
#include "voyager/agent/state_view.hpp"

#include "voyager/util/text.hpp"

#include <fmt/format.h>

namespace voyager::agent {

StateView full_view(const craftworld::AgentState& s)
{
    StateView v;
    v.inventory = s.inventory;
    v.equipment = s.equipment;
    v.nearby_blocks = s.nearby_blocks;
    v.recently_seen_blocks = s.recently_seen_blocks;
    v.nearby_entities = s.nearby_entities;
    v.chests = s.known_chests;
    v.biome = s.biome;
    v.time = s.time_of_day;
    v.health = s.health;
    v.hunger = s.hunger;
    v.position = s.position;
    return v;
}

std::string render_inventory(const craftworld::Inventory& inv)
{
    std::vector<std::string> parts;
    for (const auto& [item, n] : inv)
        if (n > 0)
            parts.push_back(fmt::format("'{}': {}", item, n));
    return "{" + util::join(parts, ", ") + "}";
}

namespace {

std::string names(const std::set<std::string>& s)
{
    if (s.empty())
        return "None";
    return util::join(std::vector<std::string>(s.begin(), s.end()), ", ");
}

std::vector<std::pair<std::string, std::string>> lines(const StateView& v)
{
    std::vector<std::pair<std::string, std::string>> out;
    if (v.biome)
        out.emplace_back("Biome", *v.biome);
    if (v.time)
        out.emplace_back("Time", std::string(craftworld::to_string(*v.time)));
    if (v.nearby_blocks)
        out.emplace_back("Nearby blocks", names(*v.nearby_blocks));
    if (v.recently_seen_blocks)
        out.emplace_back("Other blocks that are recently seen", names(*v.recently_seen_blocks));
    if (v.nearby_entities)
        out.emplace_back("Nearby entities", names(*v.nearby_entities));
    if (v.health)
        out.emplace_back("Health", fmt::format("{}/20", *v.health));
    if (v.hunger)
        out.emplace_back("Hunger", fmt::format("{}/20", *v.hunger));
    if (v.position)
        out.emplace_back("Position", fmt::format("x={}, y={}, z={}", v.position->x, v.position->y, v.position->z));
    if (v.equipment) {
        std::vector<std::string> parts;
        for (const auto& [slot, item] : *v.equipment)
            parts.push_back(fmt::format("{}: {}", craftworld::to_string(slot), item));
        out.emplace_back("Equipment", parts.empty() ? "None" : util::join(parts, ", "));
    }
    if (v.inventory) {
        int kinds = 0;
        for (const auto& [item, n] : *v.inventory)
            kinds += n > 0;
        auto label = v.core_inventory_only ? fmt::format("Inventory ({} core items)", kinds)
                                           : fmt::format("Inventory ({}/36)", kinds);
        out.emplace_back(label, kinds == 0 ? "Empty" : render_inventory(*v.inventory));
    }
    if (v.chests) {
        std::vector<std::string> parts;
        for (const auto& [pos, items] : *v.chests)
            parts.push_back(fmt::format("{}: {}", craftworld::to_string(pos),
                                        items ? (items->empty() ? "Empty" : render_inventory(*items))
                                              : "Unknown items inside"));
        out.emplace_back("Chests", parts.empty() ? "None" : util::join(parts, "; "));
    }
    return out;
}

} // namespace

std::vector<std::string> field_labels(const StateView& v)
{
    std::vector<std::string> out;
    for (auto& [label, text] : lines(v))
        out.push_back(label.rfind("Inventory", 0) == 0 ? "Inventory" : label);
    return out;
}

std::string render(const StateView& v)
{
    std::string out;
    for (const auto& [label, text] : lines(v))
        out += fmt::format("{}: {}\n", label, text);
    return out;
}

} // namespace voyager::agent

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/types.hpp"

#include <optional>
#include <string>

namespace voyager::agent {

/// The parts of an AgentState that a prompt shows. Absent fields are omitted from the text.
struct StateView {
    std::optional<craftworld::Inventory> inventory;
    bool core_inventory_only = false;
    std::optional<std::map<craftworld::EquipSlot, std::string>> equipment;
    std::optional<std::set<std::string>> nearby_blocks;
    std::optional<std::set<std::string>> recently_seen_blocks;
    std::optional<std::set<std::string>> nearby_entities;
    std::optional<std::map<craftworld::Position, std::optional<craftworld::Inventory>>> chests;
    std::optional<std::string> biome;
    std::optional<craftworld::TimeOfDay> time;
    std::optional<int> health;
    std::optional<int> hunger;
    std::optional<craftworld::Position> position;

    friend bool operator==(const StateView&, const StateView&) = default;
};

StateView full_view(const craftworld::AgentState& s);

/// Labels in the order they are rendered, e.g. "Inventory", "Nearby blocks".
std::vector<std::string> field_labels(const StateView& v);

std::string render(const StateView& v);

std::string render_inventory(const craftworld::Inventory& inv);

} // namespace voyager::agent

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/world.hpp"

#include <string>

namespace voyager::testing {

/// The bundled config shrunk to a 96x96 footprint with every region forced to `biome`.
inline craftworld::WorldConfig small_config(std::uint64_t seed = 1, const std::string& biome = "forest")
{
    auto cfg = craftworld::default_world_config(seed);
    cfg.half_extent = 48;
    for (int rz = -1; rz <= 0; ++rz)
        for (int rx = -1; rx <= 0; ++rx)
            cfg.biome_layout[{rx, rz}] = biome;
    return cfg;
}

inline craftworld::World small_world(std::uint64_t seed = 1, const std::string& biome = "forest")
{
    return craftworld::World::create(small_config(seed, biome));
}

/// First air cell directly above the ground within a few blocks of the agent.
inline craftworld::Position free_spot_near(const craftworld::World& world, int dx = 2)
{
    auto p = world.position();
    for (int d = dx; d < dx + 20; ++d) {
        auto candidate = craftworld::Position{p.x + d, world.top_solid_y(p.x + d, p.z) + 1, p.z};
        if (world.block_at(candidate) == "air")
            return candidate;
    }
    return {p.x, p.y + 2, p.z};
}

} // namespace voyager::testing

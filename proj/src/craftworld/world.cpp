// SPDX-License-Identifier: Apache-2.0
#include "voyager/craftworld/world.hpp"

#include "voyager/util/hash.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <unordered_map>

namespace voyager::craftworld {

namespace {

constexpr int kCell = 32;         // ore and mob neighborhoods
constexpr int kTreeArea = 16;
constexpr int kMobSlotsDay = 3;
constexpr int kMobSlotsNight = 3;
constexpr int kTicksPerExchange = 20;
constexpr std::size_t kAstarBudget = 20000;

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

double lattice(std::uint64_t seed, std::uint64_t salt, int gx, int gz)
{
    auto h = util::mix(seed, salt, static_cast<std::int64_t>(gx), static_cast<std::int64_t>(gz));
    return static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
}

double value_noise(std::uint64_t seed, std::uint64_t salt, int x, int z, int spacing)
{
    int gx = floor_div(x, spacing);
    int gz = floor_div(z, spacing);
    double fx = static_cast<double>(x - gx * spacing) / spacing;
    double fz = static_cast<double>(z - gz * spacing) / spacing;
    auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
    double sx = smooth(fx);
    double sz = smooth(fz);
    double v00 = lattice(seed, salt, gx, gz);
    double v10 = lattice(seed, salt, gx + 1, gz);
    double v01 = lattice(seed, salt, gx, gz + 1);
    double v11 = lattice(seed, salt, gx + 1, gz + 1);
    double a = v00 + (v10 - v00) * sx;
    double b = v01 + (v11 - v01) * sx;
    return a + (b - a) * sz;
}

std::string article_for(std::string_view phrase)
{
    if (!phrase.empty() && std::string_view("aeiou").find(phrase.front()) != std::string_view::npos)
        return "an";
    return "a";
}

int sign(int v) { return (v > 0) - (v < 0); }

} // namespace

// ---- Direction ---------------------------------------------------------------

std::optional<Direction> Direction::parse(std::string_view name)
{
    static const std::map<std::string, Direction, std::less<>> table{
        {"east", {1, 0}},       {"west", {-1, 0}},      {"south", {0, 1}},      {"north", {0, -1}},
        {"southeast", {1, 1}},  {"southwest", {-1, 1}}, {"northeast", {1, -1}}, {"northwest", {-1, -1}},
        {"+x", {1, 0}},         {"-x", {-1, 0}},        {"+z", {0, 1}},         {"-z", {0, -1}},
    };
    auto it = table.find(util::to_lower(name));
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

std::string Direction::name() const
{
    std::string out;
    if (dz < 0)
        out = "north";
    else if (dz > 0)
        out = "south";
    if (dx > 0)
        out += "east";
    else if (dx < 0)
        out += "west";
    return out;
}

// ---- construction --------------------------------------------------------------

World::World(WorldConfig config) : config_(std::move(config)) {}

World World::create(WorldConfig config)
{
    config.validate();
    World world(std::move(config));
    world.generate();
    return world;
}

std::size_t World::index(Position p) const
{
    auto e = config_.half_extent;
    return (static_cast<std::size_t>(p.y - config_.min_y) * width_ + static_cast<std::size_t>(p.z + e)) * width_ +
           static_cast<std::size_t>(p.x + e);
}

bool World::in_bounds(Position p) const
{
    auto e = config_.half_extent;
    return p.x >= -e && p.x < e && p.z >= -e && p.z < e && p.y >= config_.min_y && p.y < config_.max_y;
}

std::uint8_t World::id_at(Position p) const { return in_bounds(p) ? grid_[index(p)] : bedrock_; }

void World::set_id(Position p, std::uint8_t id)
{
    if (in_bounds(p))
        grid_[index(p)] = id;
}

std::string World::block_at(Position p) const
{
    if (!in_bounds(p))
        return "void";
    return registry().block_by_id(id_at(p)).name;
}

void World::set_block(Position p, std::string_view name) { set_id(p, registry().block_id(name)); }

std::string World::biome_at(int x, int z) const
{
    int rx = floor_div(x, config_.region_size);
    int rz = floor_div(z, config_.region_size);
    if (auto it = config_.biome_layout.find({rx, rz}); it != config_.biome_layout.end())
        return it->second;
    if (config_.biome_pool.empty())
        return config_.biome_layout.begin()->second;
    auto h = util::mix(config_.seed, 0xb10eULL, static_cast<std::int64_t>(rx), static_cast<std::int64_t>(rz));
    return config_.biome_pool[h % config_.biome_pool.size()];
}

int World::terrain_height(int x, int z) const
{
    double broad = value_noise(config_.seed, 0x4e16ULL, x, z, 24);
    double fine = value_noise(config_.seed, 0xf1e5ULL, x, z, 8);
    return config_.base_height + static_cast<int>(std::lround((broad - 0.5) * 10.0 + (fine - 0.5) * 4.0));
}

int World::top_solid_y(int x, int z) const
{
    for (int y = config_.max_y - 1; y > config_.min_y; --y) {
        auto id = id_at({x, y, z});
        if (!registry().block_by_id(id).replaceable)
            return y;
    }
    return config_.min_y;
}

Position World::surface_above(int x, int z) const
{
    return {x, std::min(top_solid_y(x, z) + 1, config_.max_y - 1), z};
}

void World::generate()
{
    const auto& reg = registry();
    auto e = config_.half_extent;
    width_ = 2 * e;
    height_ = config_.max_y - config_.min_y;
    grid_.assign(static_cast<std::size_t>(width_) * width_ * height_, 0);
    air_ = reg.block_id("air");
    bedrock_ = reg.block_id("bedrock");
    chest_ = reg.block_id("chest");
    const auto stone = reg.block_id("stone");
    const auto deepslate = reg.block_id("deepslate");

    std::unordered_map<std::string, const BiomeInfo*> biome_cache;
    auto biome_info = [&](int x, int z) {
        auto name = biome_at(x, z);
        auto [it, inserted] = biome_cache.emplace(name, nullptr);
        if (inserted)
            it->second = reg.biome(name);
        return it->second;
    };

    std::vector<int> heights(static_cast<std::size_t>(width_) * width_);
    auto height_of = [&](int x, int z) -> int& { return heights[static_cast<std::size_t>(z + e) * width_ + (x + e)]; };

    for (int z = -e; z < e; ++z) {
        for (int x = -e; x < e; ++x) {
            const auto* biome = biome_info(x, z);
            int h = terrain_height(x, z);
            height_of(x, z) = h;
            auto surface = reg.block_id(biome->surface);
            auto sub = reg.block_id(biome->subsurface);
            for (int y = config_.min_y; y <= h; ++y) {
                std::uint8_t id = stone;
                if (y == config_.min_y)
                    id = bedrock_;
                else if (y < 0)
                    id = deepslate;
                else if (y == h)
                    id = surface;
                else if (y >= h - 3)
                    id = sub;
                grid_[index({x, y, z})] = id;
            }
        }
    }

    // Ores replace stone or deepslate only.
    for (std::size_t ore_index = 0; ore_index < config_.ore_depth_table.size(); ++ore_index) {
        const auto& band = config_.ore_depth_table[ore_index];
        auto id = reg.block_id(band.block);
        int span = band.max_y - band.min_y + 1;
        for (int cz = floor_div(-e, kCell); cz <= floor_div(e - 1, kCell); ++cz) {
            for (int cx = floor_div(-e, kCell); cx <= floor_div(e - 1, kCell); ++cx) {
                for (int k = 0; k < band.abundance; ++k) {
                    auto r = util::mix(config_.seed, 0x0e5ULL + ore_index, static_cast<std::int64_t>(cx),
                                       static_cast<std::int64_t>(cz), static_cast<std::uint64_t>(k));
                    Position p{cx * kCell + static_cast<int>(r % kCell),
                               band.min_y + static_cast<int>((r >> 16) % static_cast<std::uint64_t>(span)),
                               cz * kCell + static_cast<int>((r >> 8) % kCell)};
                    auto walk = util::splitmix64(r);
                    for (int c = 0; c < band.cluster; ++c) {
                        if (in_bounds(p)) {
                            auto cur = grid_[index(p)];
                            if (cur == stone || cur == deepslate)
                                grid_[index(p)] = id;
                        }
                        p = p + Position{static_cast<int>(walk % 3) - 1, static_cast<int>((walk >> 2) % 3) - 1,
                                         static_cast<int>((walk >> 4) % 3) - 1};
                        walk = util::splitmix64(walk);
                    }
                }
            }
        }
    }

    // Trees.
    for (int az = floor_div(-e, kTreeArea); az <= floor_div(e - 1, kTreeArea); ++az) {
        for (int ax = floor_div(-e, kTreeArea); ax <= floor_div(e - 1, kTreeArea); ++ax) {
            const auto* area_biome = biome_info(ax * kTreeArea + kTreeArea / 2, az * kTreeArea + kTreeArea / 2);
            for (int t = 0; t < area_biome->tree_density; ++t) {
                auto r = util::mix(config_.seed, 0x7eeULL, static_cast<std::int64_t>(ax), static_cast<std::int64_t>(az),
                                   static_cast<std::uint64_t>(t));
                int x = ax * kTreeArea + 2 + static_cast<int>(r % (kTreeArea - 4));
                int z = az * kTreeArea + 2 + static_cast<int>((r >> 8) % (kTreeArea - 4));
                if (x < -e + 2 || x >= e - 2 || z < -e + 2 || z >= e - 2)
                    continue;
                const auto* biome = biome_info(x, z);
                if (biome->tree_log.empty())
                    continue;
                int base = height_of(x, z);
                int trunk = 4 + static_cast<int>((r >> 16) % 3);
                if (base + trunk + 2 >= config_.max_y)
                    continue;
                if (grid_[index({x, base + 1, z})] != air_)
                    continue;
                auto log = reg.block_id(biome->tree_log);
                auto leaves = reg.block_id(biome->tree_leaves);
                for (int y = base + 1; y <= base + trunk; ++y)
                    grid_[index({x, y, z})] = log;
                auto put_leaf = [&](int lx, int ly, int lz) {
                    Position p{lx, ly, lz};
                    if (in_bounds(p) && grid_[index(p)] == air_)
                        grid_[index(p)] = leaves;
                };
                for (int ly = base + trunk - 1; ly <= base + trunk; ++ly)
                    for (int dz = -2; dz <= 2; ++dz)
                        for (int dx = -2; dx <= 2; ++dx)
                            if (!(std::abs(dx) == 2 && std::abs(dz) == 2))
                                put_leaf(x + dx, ly, z + dz);
                for (int dz = -1; dz <= 1; ++dz)
                    for (int dx = -1; dx <= 1; ++dx)
                        if (std::abs(dx) + std::abs(dz) <= 1)
                            put_leaf(x + dx, base + trunk + 1, z + dz);
            }
        }
    }

    // Flora on free surface cells.
    for (int z = -e; z < e; ++z) {
        for (int x = -e; x < e; ++x) {
            const auto* biome = biome_info(x, z);
            if (biome->flora.empty())
                continue;
            auto roll = static_cast<int>(util::mix(config_.seed, 0xf10aULL, static_cast<std::int64_t>(x),
                                                   static_cast<std::int64_t>(z)) %
                                         1000);
            int cumulative = 0;
            for (const auto& [flora, permille] : biome->flora) {
                cumulative += permille;
                if (roll < cumulative) {
                    Position p{x, height_of(x, z) + 1, z};
                    if (in_bounds(p) && grid_[index(p)] == air_)
                        grid_[index(p)] = reg.block_id(flora);
                    break;
                }
            }
        }
    }

    for (const auto& seed_chest : config_.chests) {
        Position p = seed_chest.y ? Position{seed_chest.x, *seed_chest.y, seed_chest.z}
                                  : surface_above(seed_chest.x, seed_chest.z);
        if (!in_bounds(p))
            throw ConfigError(fmt::format("chest at {} lies outside the world", to_string(p)));
        grid_[index(p)] = chest_;
        chests_[p] = seed_chest.contents;
    }

    agent_.position = spawn_point();
    trajectory_.push_back(agent_.position);
    resense();
}

Position World::spawn_point() const
{
    auto e = config_.half_extent;
    auto try_column = [&](int x, int z) -> std::optional<Position> {
        const auto* biome = registry().biome(biome_at(x, z));
        if (!biome || biome->tree_log.empty())
            return std::nullopt;
        auto p = surface_above(x, z);
        if (id_at(p) != air_)
            return std::nullopt;
        auto below = registry().block_by_id(id_at(p - Position{0, 1, 0})).name;
        if (below != biome->surface)
            return std::nullopt;
        return p;
    };
    for (int r = 0; r < e - 1; ++r) {
        for (int dz = -r; dz <= r; ++dz) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dz)) != r)
                    continue;
                if (auto p = try_column(dx, dz))
                    return *p;
            }
        }
    }
    return surface_above(0, 0);
}

// ---- sensing -----------------------------------------------------------------

template <typename F>
void World::scan_sphere(Position center, F&& visit) const
{
    const int r = config_.sensing_radius;
    const int e = config_.half_extent;
    for (int dy = -r; dy <= r; ++dy) {
        int y = center.y + dy;
        if (y < config_.min_y || y >= config_.max_y)
            continue;
        int rem_y = r * r - dy * dy;
        for (int dz = -r; dz <= r; ++dz) {
            int z = center.z + dz;
            int rem = rem_y - dz * dz;
            if (rem < 0 || z < -e || z >= e)
                continue;
            int w = static_cast<int>(std::sqrt(static_cast<double>(rem)));
            while ((w + 1) * (w + 1) <= rem)
                ++w;
            while (w * w > rem)
                --w;
            int x0 = std::max(center.x - w, -e);
            int x1 = std::min(center.x + w, e - 1);
            if (x0 > x1)
                continue;
            std::size_t row = index({x0, y, z});
            for (int x = x0; x <= x1; ++x, ++row)
                if (visit(x, y, z, grid_[row]))
                    return;
        }
    }
}

std::set<std::string> World::sense_blocks() const
{
    std::bitset<256> present;
    scan_sphere(agent_.position, [&](int, int, int, std::uint8_t id) {
        present.set(id);
        return false;
    });
    std::set<std::string> names;
    for (std::size_t id = 0; id < registry().block_count(); ++id)
        if (present.test(id) && id != air_)
            names.insert(registry().block_by_id(static_cast<std::uint8_t>(id)).name);
    return names;
}

void World::resense()
{
    std::bitset<256> present;
    std::vector<Position> chest_positions;
    scan_sphere(agent_.position, [&](int x, int y, int z, std::uint8_t id) {
        present.set(id);
        if (id == chest_)
            chest_positions.push_back({x, y, z});
        return false;
    });
    for (std::size_t id = 0; id < registry().block_count(); ++id)
        if (present.test(id) && id != air_)
            seen_blocks_.insert(registry().block_by_id(static_cast<std::uint8_t>(id)).name);
    seen_chests_.insert(chest_positions.begin(), chest_positions.end());
}

bool World::block_nearby(std::string_view name) const
{
    const auto* info = registry().block(name);
    if (!info || name == "air")
        return false;
    auto id = registry().block_id(name);
    bool found = false;
    scan_sphere(agent_.position, [&](int, int, int, std::uint8_t cell) { return found = (cell == id); });
    return found;
}

bool World::station_nearby(std::string_view name) const { return block_nearby(name); }

std::vector<Position> World::nearest_blocks(std::uint8_t id, int limit) const
{
    std::vector<std::pair<long long, Position>> hits;
    scan_sphere(agent_.position, [&](int x, int y, int z, std::uint8_t cell) {
        if (cell == id) {
            Position p{x, y, z};
            hits.emplace_back(distance_squared(p, agent_.position), p);
        }
        return false;
    });
    std::sort(hits.begin(), hits.end());
    std::vector<Position> out;
    for (std::size_t i = 0; i < hits.size() && static_cast<int>(i) < limit; ++i)
        out.push_back(hits[i].second);
    return out;
}

namespace {

TimeOfDay time_of_day_at(long long tick, int day_length)
{
    long long phase = (tick % day_length) * 24000 / day_length;
    if (phase < 1000)
        return TimeOfDay::sunrise;
    if (phase < 6000)
        return TimeOfDay::day;
    if (phase < 12000)
        return TimeOfDay::noon;
    if (phase < 13000)
        return TimeOfDay::sunset;
    if (phase < 18000)
        return TimeOfDay::night;
    return TimeOfDay::midnight;
}

const MobSpawn* pick_weighted(const std::vector<MobSpawn>& list, std::uint64_t r)
{
    long long total = 0;
    for (const auto& s : list)
        total += s.weight;
    if (total <= 0)
        return nullptr;
    long long roll = static_cast<long long>(r % static_cast<std::uint64_t>(total));
    for (const auto& s : list) {
        roll -= s.weight;
        if (roll < 0)
            return &s;
    }
    return nullptr;
}

} // namespace

std::vector<Entity> World::nearby_entities() const
{
    const int r = config_.sensing_radius;
    const auto& pos = agent_.position;
    const auto day = static_cast<std::uint64_t>(tick_ / config_.day_length_ticks);
    auto tod = time_of_day_at(tick_, config_.day_length_ticks);
    bool dark = tod == TimeOfDay::night || tod == TimeOfDay::midnight;

    std::vector<std::pair<long long, Entity>> found;
    for (int cz = floor_div(pos.z - r, kCell); cz <= floor_div(pos.z + r, kCell); ++cz) {
        for (int cx = floor_div(pos.x - r, kCell); cx <= floor_div(pos.x + r, kCell); ++cx) {
            auto biome = biome_at(cx * kCell + kCell / 2, cz * kCell + kCell / 2);
            auto emit = [&](const std::vector<MobSpawn>* list, int slot) {
                auto h = util::mix(config_.seed, 0xe47ULL, static_cast<std::int64_t>(cx), static_cast<std::int64_t>(cz),
                                   day, static_cast<std::uint64_t>(slot));
                if (!list || killed_.count(h))
                    return;
                const auto* spawn = pick_weighted(*list, h);
                if (!spawn)
                    return;
                int x = cx * kCell + static_cast<int>((h >> 20) % kCell);
                int z = cz * kCell + static_cast<int>((h >> 28) % kCell);
                if (!in_bounds({x, config_.min_y, z}))
                    return;
                Position p = surface_above(x, z);
                auto d = distance_squared(p, pos);
                if (d > static_cast<long long>(r) * r)
                    return;
                found.push_back({d, Entity{h, spawn->mob, p}});
            };
            auto find_list = [&](const std::string& key) -> const std::vector<MobSpawn>* {
                auto it = config_.mob_spawn_table.find(key);
                return it == config_.mob_spawn_table.end() ? nullptr : &it->second;
            };
            const auto* day_list = find_list(biome);
            for (int s = 0; s < kMobSlotsDay; ++s)
                emit(day_list, s);
            if (dark) {
                const auto* night_list = find_list("night");
                for (int s = 0; s < kMobSlotsNight; ++s)
                    emit(night_list, 1000 + s);
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.id < b.second.id;
    });
    std::vector<Entity> out;
    for (auto& [_, e] : found)
        out.push_back(std::move(e));
    return out;
}

bool World::entity_nearby(std::string_view name) const
{
    for (const auto& e : nearby_entities())
        if (e.name == name)
            return true;
    return false;
}

int World::inventory_count(std::string_view item) const
{
    auto it = agent_.inventory.find(std::string(item));
    return it == agent_.inventory.end() ? 0 : it->second;
}

AgentState World::observe() const
{
    AgentState s;
    s.inventory = agent_.inventory;
    s.equipment = agent_.equipment;
    s.nearby_blocks = sense_blocks();
    for (const auto& b : seen_blocks_)
        if (!s.nearby_blocks.count(b) && !s.inventory.count(b))
            s.recently_seen_blocks.insert(b);
    for (const auto& e : nearby_entities())
        s.nearby_entities.insert(e.name);
    for (const auto& p : seen_chests_) {
        if (id_at(p) != chest_)
            continue;
        if (opened_chests_.count(p)) {
            auto it = chests_.find(p);
            s.known_chests[p] = it == chests_.end() ? Inventory{} : it->second;
        } else {
            s.known_chests[p] = std::nullopt;
        }
    }
    s.biome = biome_at(agent_.position.x, agent_.position.z);
    s.time_of_day = time_of_day_at(tick_, config_.day_length_ticks);
    s.health = agent_.health;
    s.hunger = agent_.hunger;
    s.position = agent_.position;
    return s;
}

// ---- event bookkeeping ---------------------------------------------------------------

ActionResult World::begin_result(std::string op, std::vector<std::string> args)
{
    pending_op_ = std::move(op);
    pending_args_ = std::move(args);
    before_ = {agent_.inventory, agent_.position, agent_.health, agent_.hunger};
    return {};
}

void World::advance(int ticks) { tick_ += ticks; }

ActionResult World::finish(ActionResult result)
{
    advance(config_.ticks_per_call);
    ++calls_;
    if (calls_ % config_.hunger_decay_calls == 0) {
        if (agent_.hunger > 0)
            --agent_.hunger;
        else if (agent_.health > 0)
            --agent_.health;
        if (agent_.hunger >= 18 && agent_.health > 0 && agent_.health < 20)
            ++agent_.health;
        if (agent_.health == 0)
            die(result.feedback, "starvation");
    }
    resense();

    EventRecord rec;
    rec.tick = tick_;
    rec.op = pending_op_;
    rec.args = pending_args_;
    rec.feedback = result.feedback;
    rec.error = result.error.value_or("");
    for (const auto& [item, n] : agent_.inventory)
        if (n > 0 && ever_held_.insert(item).second)
            rec.new_items.push_back(item);

    std::string delta;
    std::set<std::string> keys;
    for (const auto& [k, _] : before_.inventory)
        keys.insert(k);
    for (const auto& [k, _] : agent_.inventory)
        keys.insert(k);
    for (const auto& k : keys) {
        auto a = before_.inventory.count(k) ? before_.inventory.at(k) : 0;
        auto b = inventory_count(k);
        if (a != b)
            delta += fmt::format("{}:{:+d};", k, b - a);
    }
    delta += fmt::format("pos:{};hp:{};hu:{};tick:{}", to_string(agent_.position), agent_.health, agent_.hunger, tick_);
    rec.digest = util::digest(delta);
    events_.push_back(std::move(rec));
    return result;
}

std::string World::event_log_text() const
{
    std::string out;
    for (const auto& e : events_) {
        out += to_json_line(e);
        out += '\n';
    }
    return out;
}

// ---- inventory helpers ---------------------------------------------------------------

void World::credit(const std::string& item, int count)
{
    if (!item.empty() && count > 0)
        agent_.inventory[item] += count;
}

void World::debit(const std::string& item, int count)
{
    auto it = agent_.inventory.find(item);
    if (it == agent_.inventory.end())
        return;
    it->second -= count;
    if (it->second <= 0)
        agent_.inventory.erase(it);
    prune_equipment();
}

int World::count_matching(const Ingredient& ing) const
{
    if (!ing.is_tag)
        return inventory_count(ing.name);
    int total = 0;
    for (const auto& m : registry().tag_members(ing.name))
        total += inventory_count(m);
    return total;
}

void World::debit_matching(const Ingredient& ing, int count)
{
    if (!ing.is_tag) {
        debit(ing.name, count);
        return;
    }
    for (const auto& m : registry().tag_members(ing.name)) {
        if (count <= 0)
            break;
        int take = std::min(count, inventory_count(m));
        if (take > 0) {
            debit(m, take);
            count -= take;
        }
    }
}

std::string World::item_phrase(std::string_view item, int count) const
{
    if (count == 1) {
        auto name = registry().display_name(item);
        return article_for(name) + " " + name;
    }
    return fmt::format("{} {}", count, registry().plural_name(item));
}

void World::prune_equipment()
{
    for (auto it = agent_.equipment.begin(); it != agent_.equipment.end();) {
        if (inventory_count(it->second) <= 0)
            it = agent_.equipment.erase(it);
        else
            ++it;
    }
}

void World::auto_equip_pickaxe()
{
    std::optional<std::pair<ToolTier, std::string>> best;
    for (const auto& [item, n] : agent_.inventory) {
        auto tier = registry().pickaxe_tier(item);
        if (n > 0 && tier && (!best || *tier > best->first))
            best = std::make_pair(*tier, item);
    }
    if (best)
        agent_.equipment[EquipSlot::hand] = best->second;
}

void World::auto_equip_weapon()
{
    std::optional<std::pair<int, std::string>> best;
    for (const auto& [item, n] : agent_.inventory) {
        int dmg = registry().weapon_damage(item);
        if (n > 0 && dmg > 1 && (!best || dmg > best->first))
            best = std::make_pair(dmg, item);
    }
    if (best)
        agent_.equipment[EquipSlot::hand] = best->second;
}

void World::die(std::vector<std::string>& feedback, std::string_view cause)
{
    feedback.push_back(fmt::format("I died from {}.", cause));
    agent_.position = surface_above(agent_.position.x, agent_.position.z);
    agent_.health = 20;
    agent_.hunger = 20;
    trajectory_.push_back(agent_.position);
    feedback.push_back(fmt::format("Respawned at {} with inventory kept.", to_string(agent_.position)));
}

// ---- primitives ---------------------------------------------------------------

ActionResult World::mine_block(std::string_view name, int count)
{
    begin_result("mineBlock", {std::string(name), std::to_string(count)});
    if (count < 1)
        return finish(ActionResult::fault("mineBlock: count must be at least 1"));
    const auto* info = registry().block(name);
    if (!info || name == "air")
        return finish(ActionResult::fault(fmt::format("mineBlock: unknown block '{}'", name)));
    auto display = registry().display_name(name);
    if (info->tier == ToolTier::unbreakable)
        return finish(ActionResult::failure(fmt::format("I cannot mine {}", display)));
    auto found = nearest_blocks(registry().block_id(name), count);
    if (found.empty())
        return finish(ActionResult::failure(fmt::format("No {} nearby, please explore first", display)));
    if (info->tier > ToolTier::none) {
        auto_equip_pickaxe();
        auto held = agent_.equipment.count(EquipSlot::hand) ? agent_.equipment[EquipSlot::hand] : std::string();
        auto tier = registry().pickaxe_tier(held).value_or(ToolTier::none);
        if (tier < info->tier) {
            auto tool = fmt::format("{} pickaxe", to_string(info->tier));
            return finish(ActionResult::failure(
                fmt::format("I cannot mine {} because I need at least {} {}", display, article_for(tool), tool)));
        }
    }
    for (const auto& p : found) {
        if (id_at(p) == chest_) {
            auto it = chests_.find(p);
            if (it != chests_.end()) {
                for (const auto& [item, n] : it->second)
                    credit(item, n);
                chests_.erase(it);
            }
        }
        set_id(p, air_);
        credit(info->drop, info->drop_count);
    }
    auto mined = static_cast<int>(found.size());
    if (mined < count)
        return finish(ActionResult::failure(fmt::format(
            "I only mined {} {} because there is no more nearby; I need {} more", mined,
            mined == 1 ? display : registry().plural_name(name), count - mined)));
    return finish(ActionResult::success());
}

ActionResult World::craft_item(std::string_view name, int count)
{
    begin_result("craftItem", {std::string(name), std::to_string(count)});
    if (count < 1)
        return finish(ActionResult::fault("craftItem: count must be at least 1"));
    const auto* recipe = registry().recipe(name);
    if (!recipe)
        return finish(ActionResult::fault(fmt::format("craftItem: no recipe for '{}'", name)));
    auto phrase = item_phrase(name, count * recipe->output_count);
    if (recipe->station == Station::crafting_table && !station_nearby("crafting_table"))
        return finish(ActionResult::failure(
            fmt::format("I cannot make {} because there is no crafting table nearby", phrase)));
    std::vector<std::string> parts;
    for (const auto& ing : recipe->inputs) {
        int need = ing.count * count;
        int have = count_matching(ing);
        if (have < need)
            parts.push_back(fmt::format("{} more {}", need - have, registry().ingredient_name(ing, need - have)));
    }
    if (!parts.empty())
        return finish(ActionResult::failure(
            fmt::format("I cannot make {} because I need: {}", phrase, util::join(parts, ", "))));
    for (const auto& ing : recipe->inputs)
        debit_matching(ing, ing.count * count);
    credit(recipe->output, recipe->output_count * count);
    return finish(ActionResult::success({fmt::format("I did the recipe for {} {} times", name, count)}));
}

ActionResult World::smelt_item(std::string_view item, std::string_view fuel, int count)
{
    begin_result("smeltItem", {std::string(item), std::string(fuel), std::to_string(count)});
    if (count < 1)
        return finish(ActionResult::fault("smeltItem: count must be at least 1"));
    const auto* recipe = registry().smelting(item);
    if (!recipe)
        return finish(ActionResult::fault(fmt::format("smeltItem: cannot smelt '{}'", item)));
    auto burn = registry().fuel_burn_ticks(fuel);
    if (!burn || *burn <= 0) {
        std::vector<std::string> names;
        for (const auto& f : registry().fuels())
            names.push_back(f.source.is_tag ? registry().ingredient_name(f.source, 2)
                                            : registry().display_name(f.source.name));
        return finish(ActionResult::failure(fmt::format("{} is not a valid fuel; valid fuels are {}",
                                                        registry().display_name(fuel), util::join(names, ", "))));
    }
    auto phrase = item_phrase(recipe->output, count);
    if (!station_nearby("furnace"))
        return finish(ActionResult::failure(fmt::format("I cannot make {} because there is no furnace nearby", phrase)));
    long long total = static_cast<long long>(count) * registry().smelt_ticks();
    int fuel_need = static_cast<int>((total + *burn - 1) / *burn);
    std::string item_s(item);
    std::string fuel_s(fuel);
    std::map<std::string, int> need{{item_s, count}};
    need[fuel_s] += fuel_need;
    std::vector<std::string> parts;
    for (const auto& [what, n] : need) {
        int have = inventory_count(what);
        if (have < n) {
            int missing = n - have;
            parts.push_back(fmt::format("{} more {}", missing,
                                        missing == 1 ? registry().display_name(what) : registry().plural_name(what)));
        }
    }
    if (!parts.empty())
        return finish(ActionResult::failure(
            fmt::format("I cannot make {} because I need: {}", phrase, util::join(parts, ", "))));
    for (const auto& [what, n] : need)
        debit(what, n);
    credit(recipe->output, count);
    return finish(ActionResult::success({fmt::format("I smelted {}", phrase)}));
}

ActionResult World::place_item(std::string_view name, Position position)
{
    begin_result("placeItem", {std::string(name), to_string(position)});
    const auto* info = registry().block(name);
    if (!info || name == "air")
        return finish(ActionResult::fault(fmt::format("placeItem: {} is not placeable", name)));
    auto display = registry().display_name(name);
    if (inventory_count(name) < 1)
        return finish(ActionResult::failure(fmt::format("I have no {} to place", display)));
    if (!in_bounds(position))
        return finish(ActionResult::failure(fmt::format("I cannot place {} at {}: outside the world", display,
                                                        to_string(position))));
    auto r = static_cast<long long>(config_.sensing_radius);
    if (distance_squared(position, agent_.position) > r * r)
        return finish(ActionResult::failure(
            fmt::format("I cannot place {} at {}: too far away", display, to_string(position))));
    if (id_at(position) != air_)
        return finish(ActionResult::failure(
            fmt::format("I cannot place {} at {}: position occupied", display, to_string(position))));
    set_id(position, registry().block_id(name));
    debit(std::string(name), 1);
    if (name == "crafting_table" || name == "furnace")
        placed_stations_.push_back(position);
    if (name == "chest") {
        chests_[position] = {};
        seen_chests_.insert(position);
        opened_chests_.insert(position);
    }
    return finish(ActionResult::success({fmt::format("Placed {} at {}", display, to_string(position))}));
}

ActionResult World::kill_mob(std::string_view mob, int timeout_ticks)
{
    begin_result("killMob", {std::string(mob), std::to_string(timeout_ticks)});
    if (timeout_ticks < 1)
        return finish(ActionResult::fault("killMob: timeout must be positive"));
    const auto* info = registry().mob(mob);
    if (!info)
        return finish(ActionResult::fault(fmt::format("killMob: unknown mob '{}'", mob)));
    auto display = registry().display_name(mob);
    std::optional<Entity> target;
    for (auto& e : nearby_entities()) {
        if (e.name == mob) {
            target = std::move(e);
            break;
        }
    }
    if (!target)
        return finish(ActionResult::failure(fmt::format("No {} nearby", display)));

    auto_equip_weapon();
    auto held = agent_.equipment.count(EquipSlot::hand) ? agent_.equipment[EquipSlot::hand] : std::string();
    int damage = registry().weapon_damage(held);
    int armor = 0;
    for (auto slot : {EquipSlot::head, EquipSlot::torso, EquipSlot::legs, EquipSlot::feet})
        if (auto it = agent_.equipment.find(slot); it != agent_.equipment.end())
            armor += registry().armor_points(it->second);
    armor = std::min(armor, 20);

    agent_.position = target->position;
    trajectory_.push_back(agent_.position);
    int mob_hp = info->hp;
    int elapsed = 0;
    while (elapsed < timeout_ticks && mob_hp > 0) {
        mob_hp -= damage;
        elapsed += kTicksPerExchange;
        if (mob_hp <= 0 || info->damage <= 0)
            continue;
        int taken = std::max(1, info->damage * (25 - armor) / 25);
        agent_.health -= taken;
        if (agent_.health <= 0) {
            agent_.health = 0;
            advance(elapsed);
            ActionResult result = ActionResult::failure(fmt::format("I was killed by {}", display));
            die(result.feedback, display);
            return finish(result);
        }
    }
    advance(elapsed);
    if (mob_hp > 0)
        return finish(
            ActionResult::failure(fmt::format("I could not kill {} within {} ticks", display, timeout_ticks)));
    killed_.insert(target->id);
    for (const auto& [drop, n] : info->drops)
        credit(drop, n);
    return finish(ActionResult::success({fmt::format("Killed {}", display)}));
}

ActionResult World::explore_until(Direction direction, int max_ticks, const std::function<bool(const World&)>& stop)
{
    begin_result("exploreUntil", {direction.name(), std::to_string(max_ticks)});
    if (max_ticks < 1)
        return finish(ActionResult::fault("exploreUntil: maxTime must be positive"));
    if (direction.dx == 0 && direction.dz == 0)
        return finish(ActionResult::fault("exploreUntil: direction has no horizontal component"));
    int steps = 0;
    bool found = false;
    bool border = false;
    while (true) {
        if (stop && stop(*this)) {
            found = true;
            break;
        }
        if (steps >= max_ticks)
            break;
        Position next{agent_.position.x + direction.dx, config_.min_y, agent_.position.z + direction.dz};
        if (!in_bounds(next)) {
            border = true;
            break;
        }
        agent_.position = surface_above(next.x, next.z);
        trajectory_.push_back(agent_.position);
        ++steps;
        advance(1);
        if (steps % 4 == 0)
            resense();
    }
    if (found)
        return finish(ActionResult::success(
            {fmt::format("Explored {} blocks {} and found what I was looking for", steps, direction.name())}));
    if (border)
        return finish(ActionResult::failure(
            fmt::format("Explored {} blocks {} and reached the border of the world", steps, direction.name())));
    return finish(ActionResult::failure(
        fmt::format("Explored {} blocks {} without finding what I was looking for", steps, direction.name())));
}

bool World::step_to(Position next)
{
    if (!in_bounds(next) || id_at(next) == bedrock_)
        return false;
    agent_.position = next;
    trajectory_.push_back(next);
    advance(1);
    return true;
}

ActionResult World::go_to(Position goal, int range)
{
    begin_result("goto", {to_string(goal), std::to_string(range)});
    if (range < 0)
        return finish(ActionResult::fault("goto: range must not be negative"));
    auto within = [&](Position p) {
        return distance_squared(p, goal) <= static_cast<long long>(range) * range;
    };
    auto unreachable = [&]() {
        return finish(ActionResult::failure(
            fmt::format("I cannot reach {}; stopped at {}", to_string(goal), to_string(agent_.position))));
    };
    auto passable = [&](Position p) { return in_bounds(p) && id_at(p) != bedrock_; };

    int budget = config_.goto_step_budget;
    int steps = 0;
    while (!within(agent_.position) && steps < budget) {
        Position d = goal - agent_.position;
        Position next = agent_.position + Position{sign(d.x), sign(d.y), sign(d.z)};
        if (!passable(next))
            break;
        step_to(next);
        ++steps;
    }
    if (within(agent_.position))
        return finish(ActionResult::success());
    if (steps >= budget)
        return unreachable();

    // Straight line is blocked; fall back to a bounded A* over the 26-neighborhood.
    auto cheb = [&](Position a) {
        Position d = a - goal;
        return std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    };
    auto h = [&](Position a) { return std::max(0, cheb(a) - range); };
    using Node = std::tuple<int, int, Position>; // f, g, pos
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    std::map<Position, Position> parent;
    std::map<Position, int> cost;
    Position start = agent_.position;
    open.push({h(start), 0, start});
    cost[start] = 0;
    std::optional<Position> reached;
    std::size_t expanded = 0;
    while (!open.empty() && expanded < kAstarBudget) {
        auto [f, g, cur] = open.top();
        open.pop();
        if (g != cost[cur])
            continue;
        ++expanded;
        if (within(cur)) {
            reached = cur;
            break;
        }
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy && !dz)
                        continue;
                    Position n = cur + Position{dx, dy, dz};
                    if (!passable(n))
                        continue;
                    auto it = cost.find(n);
                    if (it != cost.end() && it->second <= g + 1)
                        continue;
                    cost[n] = g + 1;
                    parent[n] = cur;
                    open.push({g + 1 + h(n), g + 1, n});
                }
    }
    if (!reached)
        return unreachable();
    std::vector<Position> path;
    for (Position p = *reached; p != start; p = parent[p])
        path.push_back(p);
    std::reverse(path.begin(), path.end());
    for (const auto& p : path) {
        if (steps >= budget)
            return unreachable();
        step_to(p);
        ++steps;
    }
    return finish(ActionResult::success());
}

ActionResult World::chest_transfer(Position chest, const Inventory& items, TransferDirection direction)
{
    bool get = direction == TransferDirection::get;
    std::vector<std::string> args{to_string(chest)};
    for (const auto& [item, n] : items)
        args.push_back(fmt::format("{}:{}", item, n));
    begin_result(get ? "getItemFromChest" : "depositItemIntoChest", std::move(args));
    if (id_at(chest) != chest_ || !in_bounds(chest))
        return finish(ActionResult::fault(fmt::format("no chest at {}", to_string(chest))));
    for (const auto& [item, n] : items)
        if (n < 0)
            return finish(ActionResult::fault(fmt::format("negative count for '{}'", item)));
    auto& stored = chests_[chest];
    // Walk next to the chest along the straight line.
    for (int guard = 0; distance_squared(agent_.position, chest) > 4 && guard < config_.goto_step_budget; ++guard) {
        Position d = chest - agent_.position;
        if (!step_to(agent_.position + Position{sign(d.x), sign(d.y), sign(d.z)}))
            break;
    }
    seen_chests_.insert(chest);
    opened_chests_.insert(chest);
    ActionResult result = ActionResult::success();
    for (const auto& [item, n] : items) {
        auto display = registry().display_name(item);
        if (get) {
            int avail = stored.count(item) ? stored[item] : 0;
            int moved = std::min(n, avail);
            if (moved > 0) {
                stored[item] -= moved;
                if (stored[item] == 0)
                    stored.erase(item);
                credit(item, moved);
            }
            if (moved < n) {
                result.ok = false;
                result.feedback.push_back(
                    fmt::format("I only got {} {} from the chest; it has no more", moved, display));
            } else {
                result.feedback.push_back(fmt::format("I got {} {} from the chest", n, display));
            }
        } else {
            int moved = std::min(n, inventory_count(item));
            if (moved > 0) {
                debit(item, moved);
                stored[item] += moved;
            }
            if (moved < n) {
                result.ok = false;
                result.feedback.push_back(fmt::format("I only had {} {} to deposit", moved, display));
            } else {
                result.feedback.push_back(fmt::format("I deposited {} {} into the chest", n, display));
            }
        }
    }
    return finish(result);
}

ActionResult World::equip(std::string_view item, EquipSlot slot)
{
    begin_result("equip", {std::string(item), std::string(to_string(slot))});
    auto display = registry().display_name(item);
    if (inventory_count(item) < 1)
        return finish(ActionResult::failure(fmt::format("I have no {} to equip", display)));
    bool armor_slot = slot != EquipSlot::hand && slot != EquipSlot::off_hand;
    if (armor_slot) {
        auto fits = registry().armor_slot(item);
        if (!fits || *fits != to_string(slot))
            return finish(
                ActionResult::failure(fmt::format("{} cannot be worn on {}", display, to_string(slot))));
    }
    agent_.equipment[slot] = std::string(item);
    return finish(ActionResult::success({fmt::format("Equipped {} to {}", display, to_string(slot))}));
}

ActionResult World::consume(std::string_view item)
{
    begin_result("consume", {std::string(item)});
    auto display = registry().display_name(item);
    auto food = registry().food_value(item);
    if (!food)
        return finish(ActionResult::failure(fmt::format("{} is not edible", display)));
    if (inventory_count(item) < 1)
        return finish(ActionResult::failure(fmt::format("I have no {} to eat", display)));
    agent_.hunger = std::min(20, agent_.hunger + *food);
    debit(std::string(item), 1);
    return finish(ActionResult::success({fmt::format("Ate {}", display)}));
}

ActionResult World::chat(std::string_view message)
{
    begin_result("chat", {std::string(message)});
    return finish(ActionResult::success({std::string(message)}));
}

ActionResult World::apply_death()
{
    begin_result("applyDeath", {});
    if (agent_.health != 0)
        return finish(ActionResult::fault("applyDeath: agent is alive"));
    ActionResult result = ActionResult::success();
    die(result.feedback, "damage");
    return finish(result);
}

ActionResult World::recycle_stations()
{
    begin_result("recycleStations", {});
    std::vector<std::string> feedback;
    for (const auto& p : placed_stations_) {
        auto name = block_at(p);
        if (name != "crafting_table" && name != "furnace")
            continue;
        set_id(p, air_);
        credit(name, 1);
        feedback.push_back(fmt::format("Picked up {} at {}", registry().display_name(name), to_string(p)));
    }
    placed_stations_.clear();
    return finish(ActionResult::success(std::move(feedback)));
}

void World::begin_program() { placed_stations_.clear(); }

// ---- bookkeeping queries and test setters ------------------------------------------------

std::map<std::string, long long> World::item_ledger() const
{
    std::map<std::string, long long> totals;
    std::vector<long long> per_id(registry().block_count(), 0);
    for (auto id : grid_)
        ++per_id[id];
    for (std::size_t id = 0; id < per_id.size(); ++id) {
        const auto& info = registry().block_by_id(static_cast<std::uint8_t>(id));
        if (per_id[id] > 0 && !info.drop.empty() && info.tier != ToolTier::unbreakable)
            totals[info.drop] += per_id[id] * info.drop_count;
    }
    for (const auto& [item, n] : agent_.inventory)
        totals[item] += n;
    for (const auto& [_, contents] : chests_)
        for (const auto& [item, n] : contents)
            totals[item] += n;
    return totals;
}

void World::set_inventory(Inventory inventory)
{
    agent_.inventory.clear();
    for (auto& [item, n] : inventory)
        if (n > 0)
            agent_.inventory[item] = n;
    prune_equipment();
    for (const auto& [item, _] : agent_.inventory)
        ever_held_.insert(item);
}

void World::set_health(int health) { agent_.health = std::clamp(health, 0, 20); }
void World::set_hunger(int hunger) { agent_.hunger = std::clamp(hunger, 0, 20); }

void World::set_position(Position p)
{
    agent_.position = p;
    trajectory_.push_back(p);
    resense();
}

} // namespace voyager::craftworld

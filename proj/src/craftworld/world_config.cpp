// SPDX-License-Identifier: Apache-2.0
#include "voyager/craftworld/world_config.hpp"

#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <charconv>

namespace voyager::craftworld {

namespace {

long long parse_number(std::string_view text, std::string_view context)
{
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(fmt::format("{}: malformed number '{}'", context, text));
    return value;
}

int parse_i(std::string_view text, std::string_view context) { return static_cast<int>(parse_number(text, context)); }

std::pair<std::string, int> parse_pair(std::string_view text, std::string_view context)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos)
        throw ConfigError(fmt::format("{}: expected <name>:<n>, got '{}'", context, text));
    return {std::string(text.substr(0, colon)), parse_i(text.substr(colon + 1), context)};
}

} // namespace

WorldConfig WorldConfig::parse(std::string_view text, std::shared_ptr<const Registry> registry)
{
    WorldConfig cfg;
    cfg.registry = std::move(registry);
    int line_no = 0;
    for (auto& raw : util::split_lines(text)) {
        ++line_no;
        auto line = util::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto words = util::split_ws(line);
        auto ctx = fmt::format("world config line {}", line_no);
        const auto& key = words[0];
        auto need = [&](std::size_t n) {
            if (words.size() < n)
                throw ConfigError(fmt::format("{}: '{}' needs at least {} values", ctx, key, n - 1));
        };
        std::map<std::string, int*> scalars{
            {"day_length_ticks", &cfg.day_length_ticks}, {"half_extent", &cfg.half_extent},
            {"min_y", &cfg.min_y},                       {"max_y", &cfg.max_y},
            {"base_height", &cfg.base_height},           {"region_size", &cfg.region_size},
            {"sensing_radius", &cfg.sensing_radius},     {"ticks_per_call", &cfg.ticks_per_call},
            {"hunger_decay_calls", &cfg.hunger_decay_calls}, {"goto_step_budget", &cfg.goto_step_budget},
        };
        if (key == "seed") {
            need(2);
            cfg.seed = static_cast<std::uint64_t>(parse_number(words[1], ctx));
        } else if (auto it = scalars.find(key); it != scalars.end()) {
            need(2);
            *it->second = parse_i(words[1], ctx);
        } else if (key == "biome_pool") {
            need(2);
            cfg.biome_pool.assign(words.begin() + 1, words.end());
        } else if (key == "region") {
            need(4);
            cfg.biome_layout[{parse_i(words[1], ctx), parse_i(words[2], ctx)}] = words[3];
        } else if (key == "ore") {
            need(5);
            OreBand band{words[1], parse_i(words[2], ctx), parse_i(words[3], ctx), parse_i(words[4], ctx), 1};
            if (words.size() > 5)
                band.cluster = parse_i(words[5], ctx);
            cfg.ore_depth_table.push_back(band);
        } else if (key == "mobs") {
            need(3);
            auto& list = cfg.mob_spawn_table[words[1]];
            for (std::size_t i = 2; i < words.size(); ++i) {
                auto [mob, weight] = parse_pair(words[i], ctx);
                list.push_back({mob, weight});
            }
        } else if (key == "chest") {
            need(4);
            ChestSeed chest;
            chest.x = parse_i(words[1], ctx);
            if (words[2] != "~")
                chest.y = parse_i(words[2], ctx);
            chest.z = parse_i(words[3], ctx);
            for (std::size_t i = 4; i < words.size(); ++i) {
                auto [item, n] = parse_pair(words[i], ctx);
                chest.contents[item] += n;
            }
            cfg.chests.push_back(std::move(chest));
        } else {
            throw ConfigError(fmt::format("{}: unknown key '{}'", ctx, key));
        }
    }
    return cfg;
}

WorldConfig WorldConfig::load(const std::string& path, std::shared_ptr<const Registry> registry)
{
    return parse(util::read_file(path), std::move(registry));
}

std::set<std::string> WorldConfig::possible_biomes() const
{
    std::set<std::string> out(biome_pool.begin(), biome_pool.end());
    for (const auto& [_, b] : biome_layout)
        out.insert(b);
    return out;
}

std::set<std::string> WorldConfig::generated_blocks() const
{
    std::set<std::string> out{"bedrock", "stone", "deepslate"};
    for (const auto& name : possible_biomes()) {
        const auto* biome = registry->biome(name);
        if (!biome)
            continue;
        out.insert(biome->surface);
        out.insert(biome->subsurface);
        if (!biome->tree_log.empty()) {
            out.insert(biome->tree_log);
            out.insert(biome->tree_leaves);
        }
        for (const auto& [flora, permille] : biome->flora)
            if (permille > 0)
                out.insert(flora);
    }
    for (const auto& ore : ore_depth_table)
        if (ore.abundance > 0)
            out.insert(ore.block);
    if (!chests.empty())
        out.insert("chest");
    return out;
}

std::set<std::string> WorldConfig::spawnable_mobs() const
{
    std::set<std::string> out;
    auto biomes = possible_biomes();
    for (const auto& [key, list] : mob_spawn_table) {
        if (key != "night" && !biomes.count(key))
            continue;
        for (const auto& spawn : list)
            if (spawn.weight > 0)
                out.insert(spawn.mob);
    }
    return out;
}

std::set<std::string> reachable_items(const WorldConfig& config, ToolTier tier_cap)
{
    const auto& reg = *config.registry;
    std::set<std::string> have;
    for (const auto& chest : config.chests)
        for (const auto& [item, n] : chest.contents)
            if (n > 0)
                have.insert(item);
    for (const auto& mob : config.spawnable_mobs())
        if (const auto* info = reg.mob(mob))
            for (const auto& [drop, _] : info->drops)
                have.insert(drop);

    auto blocks = config.generated_blocks();
    auto ingredient_available = [&](const Ingredient& ing) {
        if (!ing.is_tag)
            return have.count(ing.name) > 0;
        for (const auto& m : reg.tag_members(ing.name))
            if (have.count(m))
                return true;
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        auto add = [&](const std::string& item) {
            if (!item.empty() && have.insert(item).second)
                changed = true;
        };
        auto best = ToolTier::none;
        for (const auto& item : have)
            if (auto tier = reg.pickaxe_tier(item); tier && *tier <= tier_cap && *tier > best)
                best = *tier;
        for (const auto& name : blocks) {
            const auto* info = reg.block(name);
            if (info && info->tier != ToolTier::unbreakable && info->tier <= best)
                add(info->drop);
        }
        for (const auto& [_, recipe] : reg.recipes()) {
            bool ok = true;
            for (const auto& ing : recipe.inputs)
                ok = ok && ingredient_available(ing);
            if (ok)
                add(recipe.output);
        }
        bool fuel = false;
        for (const auto& f : reg.fuels())
            fuel = fuel || ingredient_available(f.source);
        if (fuel)
            for (const auto& [input, recipe] : reg.smelting_recipes())
                if (have.count(input))
                    add(recipe.output);
    }
    return have;
}

void WorldConfig::validate() const
{
    if (!registry)
        throw ConfigError("world config has no registry");
    const auto& reg = *registry;
    if (half_extent < 16)
        throw ConfigError(fmt::format("half_extent {} is too small (minimum 16)", half_extent));
    if (min_y >= max_y || base_height <= min_y + 8 || base_height >= max_y - 8)
        throw ConfigError(fmt::format("vertical range [{}, {}) cannot hold base_height {}", min_y, max_y, base_height));
    if (day_length_ticks <= 0)
        throw ConfigError("day_length_ticks must be positive");
    if (region_size <= 0 || sensing_radius <= 0 || ticks_per_call < 0 || hunger_decay_calls <= 0 ||
        goto_step_budget <= 0)
        throw ConfigError("world config scalars must be positive");
    if (biome_pool.empty() && biome_layout.empty())
        throw ConfigError("biome_pool is empty");
    for (const auto& name : possible_biomes())
        if (!reg.biome(name))
            throw ConfigError(fmt::format("unknown biome '{}'", name));
    for (const auto& ore : ore_depth_table) {
        if (!reg.block(ore.block))
            throw ConfigError(fmt::format("ore table: unknown block '{}'", ore.block));
        if (ore.min_y > ore.max_y || ore.abundance < 0 || ore.cluster < 1)
            throw ConfigError(fmt::format("ore table: malformed entry for '{}'", ore.block));
    }
    for (const auto& [biome, list] : mob_spawn_table) {
        if (biome != "night" && !reg.biome(biome))
            throw ConfigError(fmt::format("mob spawn table: unknown biome '{}'", biome));
        for (const auto& spawn : list)
            if (!reg.mob(spawn.mob) || spawn.weight < 0)
                throw ConfigError(fmt::format("mob spawn table: bad entry '{}' for '{}'", spawn.mob, biome));
    }

    auto have = reachable_items(*this);
    std::set<std::string> producible;
    for (const auto& b : reg.blocks())
        producible.insert(b.drop);
    for (const auto& [_, r] : reg.recipes())
        producible.insert(r.output);
    for (const auto& [_, r] : reg.smelting_recipes())
        producible.insert(r.output);
    for (const auto& [_, m] : reg.mobs())
        for (const auto& [d, __] : m.drops)
            producible.insert(d);

    // Report root causes (items nothing produces) before their downstream victims.
    std::vector<std::string> missing_roots;
    std::vector<std::string> missing;
    auto check = [&](const std::string& item, const std::string& where) {
        if (have.count(item))
            return;
        auto entry = fmt::format("unreachable item '{}' ({})", item, where);
        (producible.count(item) ? missing : missing_roots).push_back(entry);
    };
    for (const auto& [_, r] : reg.recipes()) {
        for (const auto& ing : r.inputs) {
            if (!ing.is_tag) {
                check(ing.name, "input of recipe " + r.output);
                continue;
            }
            bool any = false;
            for (const auto& m : reg.tag_members(ing.name))
                any = any || have.count(m) > 0;
            if (!any)
                missing_roots.push_back(fmt::format("unreachable item '#{}' (input of recipe {})", ing.name, r.output));
        }
        check(r.output, "output of recipe " + r.output);
    }
    for (const auto& [input, r] : reg.smelting_recipes()) {
        check(input, "smelting input");
        check(r.output, "smelting output");
    }
    if (!missing_roots.empty())
        throw ConfigError(missing_roots.front());
    if (!missing.empty())
        throw ConfigError(missing.front());

    for (const char* tool : {"wooden_pickaxe", "stone_pickaxe", "iron_pickaxe", "diamond_pickaxe"})
        if (reg.recipe(tool) && !have.count(tool))
            throw ConfigError(fmt::format("tech tree tier '{}' is unreachable", tool));
}

WorldConfig default_world_config(std::uint64_t seed)
{
    auto cfg = WorldConfig::load(data_path("world.conf"), default_registry());
    cfg.seed = seed;
    return cfg;
}

} // namespace voyager::craftworld

// SPDX-License-Identifier: Apache-2.0
#include "voyager/craftworld/registry.hpp"

#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <charconv>
#include <filesystem>

#ifndef VOYAGER_DATA_DIR
#define VOYAGER_DATA_DIR "data"
#endif

namespace voyager::craftworld {

namespace {

int parse_int(std::string_view text, std::string_view context)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(fmt::format("malformed integer '{}' in {}", text, context));
    return value;
}

/// "name:count" -> (name, count); count defaults to 1.
std::pair<std::string, int> parse_counted(std::string_view text, std::string_view context)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos)
        return {std::string(text), 1};
    return {std::string(text.substr(0, colon)), parse_int(text.substr(colon + 1), context)};
}

Ingredient parse_ingredient(std::string_view text, std::string_view context)
{
    auto [name, count] = parse_counted(text, context);
    Ingredient ing;
    ing.is_tag = !name.empty() && name.front() == '#';
    ing.name = ing.is_tag ? name.substr(1) : name;
    ing.count = count;
    if (ing.name.empty() || count < 1)
        throw ConfigError(fmt::format("malformed ingredient '{}' in {}", text, context));
    return ing;
}

std::vector<std::pair<std::string, int>> parse_counted_list(std::string_view text, std::string_view context)
{
    std::vector<std::pair<std::string, int>> out;
    for (auto& piece : util::split(text, ',', true))
        out.push_back(parse_counted(piece, context));
    return out;
}

/// Splits `key=value` attributes from positional words.
struct Fields {
    std::vector<std::string> positional;
    std::map<std::string, std::string> attrs;
    std::set<std::string> flags;
};

Fields parse_fields(const std::vector<std::string>& words, std::size_t from)
{
    Fields f;
    for (std::size_t i = from; i < words.size(); ++i) {
        auto eq = words[i].find('=');
        if (eq != std::string::npos)
            f.attrs[words[i].substr(0, eq)] = words[i].substr(eq + 1);
        else
            f.positional.push_back(words[i]);
    }
    return f;
}

} // namespace

std::string_view to_string(ToolTier tier)
{
    switch (tier) {
    case ToolTier::none: return "none";
    case ToolTier::wooden: return "wooden";
    case ToolTier::stone: return "stone";
    case ToolTier::iron: return "iron";
    case ToolTier::diamond: return "diamond";
    case ToolTier::unbreakable: return "unbreakable";
    }
    return "none";
}

ToolTier parse_tool_tier(std::string_view text)
{
    for (auto t : {ToolTier::none, ToolTier::wooden, ToolTier::stone, ToolTier::iron, ToolTier::diamond,
                   ToolTier::unbreakable})
        if (to_string(t) == text)
            return t;
    throw ConfigError(fmt::format("unknown tool tier '{}'", text));
}

std::string_view to_string(Station station)
{
    switch (station) {
    case Station::none: return "none";
    case Station::crafting_table: return "crafting_table";
    case Station::furnace: return "furnace";
    }
    return "none";
}

Registry Registry::parse(std::string_view text)
{
    Registry reg;
    int line_no = 0;
    for (auto& raw : util::split_lines(text)) {
        ++line_no;
        std::string_view line = util::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto words = util::split_ws(line);
        const auto& kind = words[0];
        auto ctx = fmt::format("registry line {}", line_no);
        auto need = [&](std::size_t n) {
            if (words.size() < n)
                throw ConfigError(fmt::format("{}: '{}' needs at least {} fields", ctx, kind, n - 1));
        };

        if (kind == "block") {
            need(2);
            auto f = parse_fields(words, 2);
            BlockInfo b;
            b.name = words[1];
            b.drop = b.name;
            if (auto it = f.attrs.find("drop"); it != f.attrs.end()) {
                if (it->second == "none") {
                    b.drop.clear();
                } else {
                    auto [item, n] = parse_counted(it->second, ctx);
                    b.drop = item;
                    b.drop_count = n;
                }
            }
            if (auto it = f.attrs.find("tier"); it != f.attrs.end())
                b.tier = parse_tool_tier(it->second);
            for (auto& p : f.positional)
                if (p == "replaceable")
                    b.replaceable = true;
            if (reg.block_ids_.count(b.name))
                throw ConfigError(fmt::format("{}: duplicate block '{}'", ctx, b.name));
            if (reg.blocks_.empty() && b.name != "air")
                throw ConfigError(fmt::format("{}: the first block must be air", ctx));
            if (reg.blocks_.size() >= 255)
                throw ConfigError(fmt::format("{}: too many blocks", ctx));
            reg.block_ids_[b.name] = static_cast<std::uint8_t>(reg.blocks_.size());
            reg.blocks_.push_back(std::move(b));
        } else if (kind == "tag") {
            need(3);
            auto f = parse_fields(words, 2);
            reg.tags_[words[1]] = f.positional;
            auto it = f.attrs.find("display");
            reg.tag_display_[words[1]] = it != f.attrs.end() ? it->second : words[1];
        } else if (kind == "craft") {
            need(5);
            Recipe r;
            r.output = words[1];
            r.output_count = parse_int(words[2], ctx);
            if (words[3] == "crafting_table")
                r.station = Station::crafting_table;
            else if (words[3] != "none")
                throw ConfigError(fmt::format("{}: unknown station '{}'", ctx, words[3]));
            for (std::size_t i = 4; i < words.size(); ++i)
                r.inputs.push_back(parse_ingredient(words[i], ctx));
            if (reg.recipes_.count(r.output))
                throw ConfigError(fmt::format("{}: duplicate recipe for '{}'", ctx, r.output));
            reg.recipes_[r.output] = std::move(r);
        } else if (kind == "smelt") {
            need(3);
            Recipe r;
            r.output = words[2];
            r.station = Station::furnace;
            r.inputs.push_back(Ingredient{words[1], false, 1});
            reg.smelting_[words[1]] = std::move(r);
        } else if (kind == "smelt_ticks") {
            need(2);
            reg.smelt_ticks_ = parse_int(words[1], ctx);
        } else if (kind == "fuel") {
            need(3);
            reg.fuels_.push_back(Fuel{parse_ingredient(words[1], ctx), parse_int(words[2], ctx)});
        } else if (kind == "pickaxe") {
            need(3);
            reg.pickaxes_[words[1]] = parse_tool_tier(words[2]);
        } else if (kind == "weapon") {
            need(3);
            reg.weapons_[words[1]] = parse_int(words[2], ctx);
        } else if (kind == "armor") {
            need(4);
            reg.armor_[words[1]] = {words[2], parse_int(words[3], ctx)};
        } else if (kind == "food") {
            need(3);
            reg.foods_[words[1]] = parse_int(words[2], ctx);
        } else if (kind == "mob") {
            need(2);
            auto f = parse_fields(words, 2);
            MobInfo m;
            m.name = words[1];
            if (f.attrs.count("hp"))
                m.hp = parse_int(f.attrs["hp"], ctx);
            if (f.attrs.count("damage"))
                m.damage = parse_int(f.attrs["damage"], ctx);
            if (f.attrs.count("drops"))
                m.drops = parse_counted_list(f.attrs["drops"], ctx);
            reg.mobs_[m.name] = std::move(m);
        } else if (kind == "biome") {
            need(2);
            auto f = parse_fields(words, 2);
            BiomeInfo b;
            b.name = words[1];
            if (f.attrs.count("surface"))
                b.surface = f.attrs["surface"];
            if (f.attrs.count("sub"))
                b.subsurface = f.attrs["sub"];
            if (f.attrs.count("tree")) {
                auto parts = util::split(f.attrs["tree"], '/');
                if (parts.size() != 2)
                    throw ConfigError(fmt::format("{}: tree must be <log>/<leaves>", ctx));
                b.tree_log = parts[0];
                b.tree_leaves = parts[1];
            }
            if (f.attrs.count("density"))
                b.tree_density = parse_int(f.attrs["density"], ctx);
            if (f.attrs.count("flora"))
                b.flora = parse_counted_list(f.attrs["flora"], ctx);
            reg.biomes_[b.name] = std::move(b);
        } else if (kind == "plural") {
            need(3);
            std::vector<std::string> rest(words.begin() + 2, words.end());
            reg.plurals_[words[1]] = util::join(rest, " ");
        } else {
            throw ConfigError(fmt::format("{}: unknown record kind '{}'", ctx, kind));
        }
    }

    if (reg.blocks_.empty())
        throw ConfigError("registry defines no blocks");
    auto require_block = [&](const std::string& name, const std::string& where) {
        if (!reg.block_ids_.count(name))
            throw ConfigError(fmt::format("{} references unknown block '{}'", where, name));
    };
    for (const auto& [name, biome] : reg.biomes_) {
        require_block(biome.surface, "biome " + name);
        require_block(biome.subsurface, "biome " + name);
        if (!biome.tree_log.empty()) {
            require_block(biome.tree_log, "biome " + name);
            require_block(biome.tree_leaves, "biome " + name);
        }
        for (const auto& [flora, _] : biome.flora)
            require_block(flora, "biome " + name);
    }
    for (const auto& [_, r] : reg.recipes_)
        for (const auto& ing : r.inputs)
            if (ing.is_tag && !reg.tags_.count(ing.name))
                throw ConfigError(fmt::format("recipe {} references unknown tag '#{}'", r.output, ing.name));
    return reg;
}

Registry Registry::load(const std::string& path) { return parse(util::read_file(path)); }

const BlockInfo* Registry::block(std::string_view name) const
{
    auto it = block_ids_.find(name);
    return it == block_ids_.end() ? nullptr : &blocks_[it->second];
}

const MobInfo* Registry::mob(std::string_view name) const
{
    auto it = mobs_.find(name);
    return it == mobs_.end() ? nullptr : &it->second;
}

const BiomeInfo* Registry::biome(std::string_view name) const
{
    auto it = biomes_.find(name);
    return it == biomes_.end() ? nullptr : &it->second;
}

const Recipe* Registry::recipe(std::string_view output) const
{
    auto it = recipes_.find(output);
    return it == recipes_.end() ? nullptr : &it->second;
}

const Recipe* Registry::smelting(std::string_view input) const
{
    auto it = smelting_.find(input);
    return it == smelting_.end() ? nullptr : &it->second;
}

std::uint8_t Registry::block_id(std::string_view name) const
{
    auto it = block_ids_.find(name);
    if (it == block_ids_.end())
        throw ConfigError(fmt::format("unknown block '{}'", name));
    return it->second;
}

bool Registry::tag_contains(std::string_view tag, std::string_view item) const
{
    auto it = tags_.find(tag);
    if (it == tags_.end())
        return false;
    for (const auto& m : it->second)
        if (m == item)
            return true;
    return false;
}

const std::vector<std::string>& Registry::tag_members(std::string_view tag) const
{
    static const std::vector<std::string> empty;
    auto it = tags_.find(tag);
    return it == tags_.end() ? empty : it->second;
}

bool Registry::matches(const Ingredient& ingredient, std::string_view item) const
{
    return ingredient.is_tag ? tag_contains(ingredient.name, item) : ingredient.name == item;
}

std::optional<int> Registry::fuel_burn_ticks(std::string_view item) const
{
    for (const auto& fuel : fuels_)
        if (matches(fuel.source, item))
            return fuel.burn_ticks;
    return std::nullopt;
}

std::optional<ToolTier> Registry::pickaxe_tier(std::string_view item) const
{
    auto it = pickaxes_.find(item);
    if (it == pickaxes_.end())
        return std::nullopt;
    return it->second;
}

int Registry::weapon_damage(std::string_view item) const
{
    auto it = weapons_.find(item);
    return it == weapons_.end() ? 1 : it->second;
}

int Registry::armor_points(std::string_view item) const
{
    auto it = armor_.find(item);
    return it == armor_.end() ? 0 : it->second.second;
}

std::optional<std::string> Registry::armor_slot(std::string_view item) const
{
    auto it = armor_.find(item);
    if (it == armor_.end())
        return std::nullopt;
    return it->second.first;
}

std::optional<int> Registry::food_value(std::string_view item) const
{
    auto it = foods_.find(item);
    if (it == foods_.end())
        return std::nullopt;
    return it->second;
}

std::string Registry::display_name(std::string_view item) const { return util::replace_all(std::string(item), "_", " "); }

std::string Registry::plural_name(std::string_view item) const
{
    if (auto it = plurals_.find(item); it != plurals_.end())
        return it->second;
    auto name = display_name(item);
    if (name.empty())
        return name;
    auto ends = [&](std::string_view suffix) {
        return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends("s") || ends("x") || ends("sh") || ends("ch"))
        return name + "es";
    if (ends("y") && name.size() > 1 && std::string_view("aeiou").find(name[name.size() - 2]) == std::string_view::npos)
        return name.substr(0, name.size() - 1) + "ies";
    return name + "s";
}

std::string Registry::ingredient_name(const Ingredient& ing, int count) const
{
    std::string base = ing.name;
    if (ing.is_tag) {
        auto it = tag_display_.find(ing.name);
        base = it != tag_display_.end() ? it->second : ing.name;
    }
    return count == 1 ? display_name(base) : plural_name(base);
}

std::set<std::string> Registry::all_items() const
{
    std::set<std::string> items;
    for (const auto& b : blocks_)
        if (!b.drop.empty())
            items.insert(b.drop);
    auto add_ing = [&](const Ingredient& ing) {
        if (ing.is_tag)
            for (const auto& m : tag_members(ing.name))
                items.insert(m);
        else
            items.insert(ing.name);
    };
    for (const auto& [_, r] : recipes_) {
        items.insert(r.output);
        for (const auto& ing : r.inputs)
            add_ing(ing);
    }
    for (const auto& [_, r] : smelting_) {
        items.insert(r.output);
        for (const auto& ing : r.inputs)
            add_ing(ing);
    }
    for (const auto& f : fuels_)
        add_ing(f.source);
    for (const auto& [_, m] : mobs_)
        for (const auto& [d, __] : m.drops)
            items.insert(d);
    return items;
}

std::string data_dir()
{
    if (const char* env = std::getenv("VOYAGER_DATA_DIR"); env && *env)
        return env;
    return VOYAGER_DATA_DIR;
}

std::string data_path(std::string_view relative) { return (std::filesystem::path(data_dir()) / relative).string(); }

std::shared_ptr<const Registry> default_registry()
{
    static const auto reg = std::make_shared<const Registry>(Registry::load(data_path("registry.txt")));
    return reg;
}

} // namespace voyager::craftworld

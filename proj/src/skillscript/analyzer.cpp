// SPDX-License-Identifier: Apache-2.0
#include "voyager/skillscript/analyzer.hpp"

#include "voyager/skillscript/parser.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <set>

namespace voyager::skillscript {

namespace {

constexpr long long kBoundCap = 1'000'000'000'000'000LL;

long long sat_add(long long a, long long b) { return std::min(kBoundCap, a + b); }
long long sat_mul(long long a, long long b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a > kBoundCap / b)
        return kBoundCap;
    return std::min(kBoundCap, a * b);
}

ParamSpec p(std::string name, ParamType type, std::optional<std::string> def = std::nullopt)
{
    return {std::move(name), type, std::move(def)};
}

// Visits every call expression in source order.
void for_each_call(const Expr& e, const std::function<void(const Expr&)>& visit)
{
    if (e.kind == ExprKind::call)
        visit(e);
    for (const auto& c : e.children)
        for_each_call(c, visit);
}

void for_each_call(const std::vector<Stmt>& body, const std::function<void(const Expr&)>& visit)
{
    for (const auto& s : body) {
        if (s.expr)
            for_each_call(*s.expr, visit);
        for_each_call(s.body, visit);
        for_each_call(s.else_body, visit);
    }
}

class Analyzer {
public:
    Analyzer(const Function& fn, const ApiRegistry& reg) : fn_(fn), reg_(reg) {}

    std::vector<StaticError> run()
    {
        scopes_.emplace_back();
        for (const auto& param : fn_.params) {
            if (param.default_value)
                expr(*param.default_value);
            if (!scopes_.back().insert(param.name).second)
                error(fn_.loc, fmt::format("duplicate parameter '{}'", param.name));
        }
        block(fn_.body);
        cycles();
        return std::move(errors_);
    }

private:
    void error(SourceLoc loc, std::string message) { errors_.push_back({std::move(message), loc}); }

    bool bound(const std::string& name) const
    {
        for (const auto& s : scopes_)
            if (s.count(name))
                return true;
        return false;
    }

    void block(const std::vector<Stmt>& body)
    {
        scopes_.emplace_back();
        for (const auto& s : body)
            stmt(s);
        scopes_.pop_back();
    }

    void stmt(const Stmt& s)
    {
        switch (s.kind) {
        case StmtKind::let:
            expr(*s.expr);
            scopes_.back().insert(s.name);
            break;
        case StmtKind::assign:
            expr(*s.expr);
            if (!bound(s.name))
                error(s.loc, fmt::format("assignment to undeclared variable '{}'", s.name));
            break;
        case StmtKind::expr:
            expr(*s.expr);
            if (s.expr->kind != ExprKind::call)
                error(s.loc, "expression statement has no effect");
            break;
        case StmtKind::return_value:
            if (s.expr)
                expr(*s.expr);
            break;
        case StmtKind::if_else:
            expr(*s.expr);
            block(s.body);
            block(s.else_body);
            break;
        case StmtKind::repeat:
            block(s.body);
            break;
        }
    }

    void expr(const Expr& e)
    {
        if (e.kind == ExprKind::identifier) {
            if (!bound(e.text))
                error(e.loc, fmt::format("undefined variable '{}'", e.text));
            return;
        }
        if (e.kind == ExprKind::member && e.text != "x" && e.text != "y" && e.text != "z")
            error(e.loc, fmt::format("unknown field '{}' (positions have x, y, z)", e.text));
        if (e.kind != ExprKind::call) {
            for (const auto& c : e.children)
                expr(c);
            return;
        }
        for (const auto& c : e.children)
            expr(c);
        const Signature* sig = e.text == fn_.name ? nullptr : reg_.find(e.text);
        std::optional<Signature> self;
        if (e.text == fn_.name) {
            self = signature_of(fn_);
            sig = &*self;
        }
        if (!sig) {
            error(e.loc, fmt::format("unknown callable '{}'", e.text));
            return;
        }
        auto n = e.children.size();
        if (n < sig->required() || n > sig->params.size()) {
            auto range = sig->required() == sig->params.size()
                             ? std::to_string(sig->params.size())
                             : fmt::format("{} to {}", sig->required(), sig->params.size());
            error(e.loc, fmt::format("arity mismatch: '{}' takes {} argument{}, got {}", e.text, range,
                                     sig->params.size() == 1 ? "" : "s", n));
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (sig->params[i].type != ParamType::predicate)
                continue;
            for_each_call(e.children[i], [&](const Expr& inner) {
                const auto* s = reg_.find(inner.text);
                if (inner.text == fn_.name || (s && s->kind != CallableKind::query))
                    error(inner.loc, fmt::format("'{}' cannot be called inside the stop condition of '{}'",
                                                 inner.text, e.text));
            });
        }
    }

    std::vector<std::string> skill_calls(const Function& f) const
    {
        std::vector<std::string> out;
        auto visit = [&](const Expr& call) {
            if (call.text == fn_.name || (reg_.skill(call.text) && reg_.find(call.text)->kind == CallableKind::skill))
                out.push_back(call.text);
        };
        for (const auto& param : f.params)
            if (param.default_value)
                for_each_call(*param.default_value, visit);
        for_each_call(f.body, visit);
        return out;
    }

    const Function* resolve(const std::string& name) const
    {
        if (name == fn_.name)
            return &fn_;
        return reg_.skill(name);
    }

    void cycles()
    {
        std::map<std::string, int> color; // 0 white, 1 grey, 2 black
        std::vector<std::string> path;
        std::set<std::string> reported;
        std::function<void(const std::string&)> dfs = [&](const std::string& name) {
            color[name] = 1;
            path.push_back(name);
            const auto* f = resolve(name);
            if (f) {
                for (const auto& callee : skill_calls(*f)) {
                    if (color[callee] == 1) {
                        auto start = std::find(path.begin(), path.end(), callee);
                        std::vector<std::string> cycle(start, path.end());
                        cycle.push_back(callee);
                        auto text = util::join(cycle, " -> ");
                        if (reported.insert(text).second)
                            error(fn_.loc, "recursion cycle: " + text);
                    } else if (color[callee] == 0) {
                        dfs(callee);
                    }
                }
            }
            path.pop_back();
            color[name] = 2;
        };
        dfs(fn_.name);
    }

    const Function& fn_;
    const ApiRegistry& reg_;
    std::vector<std::set<std::string>> scopes_;
    std::vector<StaticError> errors_;
};

class BoundCalculator {
public:
    BoundCalculator(const Function& fn, const ApiRegistry& reg) : fn_(fn), reg_(reg) {}

    long long function(const Function& f)
    {
        if (auto it = memo_.find(f.name); it != memo_.end())
            return it->second;
        memo_[f.name] = kBoundCap; // guards against cycles that slipped past analyze()
        long long total = 0;
        for (const auto& param : f.params)
            if (param.default_value)
                total = sat_add(total, expr(*param.default_value));
        total = sat_add(total, block(f.body));
        memo_[f.name] = total;
        return total;
    }

private:
    long long block(const std::vector<Stmt>& body)
    {
        long long total = 0;
        for (const auto& s : body) {
            long long e = s.expr ? expr(*s.expr) : 0;
            switch (s.kind) {
            case StmtKind::if_else: total = sat_add(total, sat_add(e, std::max(block(s.body), block(s.else_body)))); break;
            case StmtKind::repeat: total = sat_add(total, sat_mul(s.count, block(s.body))); break;
            default: total = sat_add(total, e);
            }
        }
        return total;
    }

    long long expr(const Expr& e)
    {
        long long total = 0;
        for (const auto& c : e.children)
            total = sat_add(total, expr(c));
        if (e.kind != ExprKind::call)
            return total;
        const Function* callee = e.text == fn_.name ? &fn_ : reg_.skill(e.text);
        if (callee)
            return sat_add(total, function(*callee));
        const auto* sig = reg_.find(e.text);
        if (sig && sig->kind == CallableKind::primitive)
            return sat_add(total, 1);
        return total;
    }

    const Function& fn_;
    const ApiRegistry& reg_;
    std::map<std::string, long long> memo_;
};

} // namespace

std::string_view to_string(ParamType t)
{
    switch (t) {
    case ParamType::any: return "any";
    case ParamType::string: return "string";
    case ParamType::integer: return "int";
    case ParamType::boolean: return "bool";
    case ParamType::position: return "position";
    case ParamType::items: return "items";
    case ParamType::predicate: return "condition";
    }
    return "any";
}

std::size_t Signature::required() const
{
    std::size_t n = 0;
    for (const auto& param : params)
        if (!param.default_text)
            ++n;
    return n;
}

std::string Signature::render() const
{
    std::vector<std::string> parts;
    for (const auto& param : params) {
        auto text = param.type == ParamType::any ? param.name
                                                 : fmt::format("{}: {}", param.name, to_string(param.type));
        if (param.default_text)
            text += " = " + *param.default_text;
        parts.push_back(text);
    }
    return fmt::format("{}({})", name, util::join(parts, ", "));
}

ApiRegistry ApiRegistry::standard()
{
    using T = ParamType;
    ApiRegistry r;
    auto prim = [&](std::string name, std::vector<ParamSpec> params, std::string doc) {
        r.primitives_.push_back({std::move(name), std::move(params), std::move(doc), CallableKind::primitive});
    };
    auto query = [&](std::string name, std::vector<ParamSpec> params, std::string doc) {
        r.queries_.push_back({std::move(name), std::move(params), std::move(doc), CallableKind::query});
    };
    prim("exploreUntil", {p("direction", T::string), p("maxTime", T::integer), p("stopWhen", T::predicate)},
         "Walk in a fixed direction (east, west, north, south or a diagonal such as northeast), one block per "
         "tick, until stopWhen holds or maxTime ticks pass. stopWhen is re-evaluated at every step.");
    prim("mineBlock", {p("name", T::string), p("count", T::integer, "1")},
         "Mine and collect the specified number of blocks within a 32-block distance.");
    prim("craftItem", {p("name", T::string), p("count", T::integer, "1")},
         "Craft the item count times. Items that need a crafting table require one within 32 blocks.");
    prim("placeItem", {p("name", T::string), p("position", T::position)},
         "Place the block at the specified position, which must be empty and within 32 blocks.");
    prim("smeltItem", {p("item", T::string), p("fuel", T::string, "\"coal\""), p("count", T::integer, "1")},
         "Smelt the item with the specified fuel. A furnace must be within 32 blocks.");
    prim("killMob", {p("name", T::string), p("timeout", T::integer, "300")},
         "Attack the nearest mob of this kind and collect its dropped items.");
    prim("getItemFromChest", {p("chest", T::position), p("items", T::items)},
         "Move to the chest at the specified position and take the listed items from it.");
    prim("depositItemIntoChest", {p("chest", T::position), p("items", T::items)},
         "Move to the chest at the specified position and put the listed items into it.");
    prim("goto", {p("position", T::position), p("range", T::integer, "1")},
         "Go to a specific position, stopping once within range blocks of it.");
    prim("equip", {p("item", T::string), p("slot", T::string, "\"hand\"")},
         "Equip an item in a slot: hand, off-hand, head, torso, legs or feet.");
    prim("consume", {p("item", T::string)}, "Eat a food item to restore hunger.");
    prim("chat", {p("message", T::any)}, "Send a message to the chat log.");

    query("inventory_count", {p("item", T::string)}, "Number of this item in the inventory.");
    query("block_nearby", {p("name", T::string)}, "True if such a block is within 32 blocks.");
    query("entity_nearby", {p("name", T::string)}, "True if such a mob is within 32 blocks.");
    query("position", {}, "The agent's current position.");
    query("pos", {p("x", T::integer), p("y", T::integer), p("z", T::integer)}, "Build a position.");
    query("block_at", {p("position", T::position)}, "Name of the block at a position.");
    query("free_spot", {}, "An empty position next to the agent, standing on solid ground.");
    query("tag_count", {p("tag", T::string)}, "Total held items of a kind: logs, planks, coals, stone_tool_materials.");
    query("first_held", {p("tag", T::string)}, "First held item of a kind, or \"\" if none.");
    query("first_nearby", {p("tag", T::string)}, "First block of a kind within 32 blocks, or \"\" if none.");
    query("replace", {p("text", T::string), p("from", T::string), p("to", T::string)},
          "Copy of text with every occurrence of from replaced by to.");
    return r;
}

void ApiRegistry::add_skill(std::shared_ptr<const Function> fn, std::string doc)
{
    auto sig = signature_of(*fn, std::move(doc));
    skill_sigs_[fn->name] = std::move(sig);
    skills_[fn->name] = std::move(fn);
}

const Signature* ApiRegistry::find(std::string_view name) const
{
    for (const auto& s : primitives_)
        if (s.name == name)
            return &s;
    for (const auto& s : queries_)
        if (s.name == name)
            return &s;
    if (auto it = skill_sigs_.find(name); it != skill_sigs_.end())
        return &it->second;
    return nullptr;
}

const Function* ApiRegistry::skill(std::string_view name) const
{
    auto it = skills_.find(name);
    return it == skills_.end() ? nullptr : it->second.get();
}

std::vector<std::string> ApiRegistry::skill_names() const
{
    std::vector<std::string> out;
    for (const auto& [name, _] : skills_)
        out.push_back(name);
    return out;
}

Signature signature_of(const Function& fn, std::string doc)
{
    Signature sig;
    sig.name = fn.name;
    sig.kind = CallableKind::skill;
    sig.doc = std::move(doc);
    for (const auto& param : fn.params) {
        ParamSpec spec{param.name, ParamType::any, std::nullopt};
        if (param.default_value)
            spec.default_text = print(*param.default_value);
        sig.params.push_back(std::move(spec));
    }
    return sig;
}

std::vector<StaticError> analyze(const Function& fn, const ApiRegistry& registry)
{
    return Analyzer(fn, registry).run();
}

std::string render(const StaticError& e)
{
    return fmt::format("{} (line {}, column {})", e.message, e.loc.line, e.loc.column);
}

long long static_call_bound(const Function& fn, const ApiRegistry& registry)
{
    return BoundCalculator(fn, registry).function(fn);
}

std::string render_api_docs(const ApiRegistry& registry)
{
    std::string out = "Control primitives:\n";
    for (const auto& s : registry.primitives())
        out += fmt::format("- {}: {}\n", s.render(), s.doc);
    out += "\nQueries (free to call, they do not use up actions):\n";
    for (const auto& s : registry.queries())
        out += fmt::format("- {}: {}\n", s.render(), s.doc);
    auto names = registry.skill_names();
    if (!names.empty()) {
        out += "\nSkills:\n";
        for (const auto& name : names) {
            const auto* s = registry.find(name);
            out += s->doc.empty() ? fmt::format("- {}\n", s->render()) : fmt::format("- {}: {}\n", s->render(), s->doc);
        }
    }
    return out;
}

} // namespace voyager::skillscript

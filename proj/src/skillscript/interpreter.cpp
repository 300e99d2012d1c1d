// SPDX-License-Identifier: Apache-2.0
#include "voyager/skillscript/interpreter.hpp"

#include "voyager/skillscript/parser.hpp"
#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <map>

namespace voyager::skillscript {

using craftworld::Inventory;
using craftworld::Position;

namespace {

constexpr std::size_t kMaxCallDepth = 64;

struct Fault {
    ErrorKind kind;
    std::string message;
    SourceLoc loc;
    std::vector<std::string> trace;
};

Value make(long long v) { return Value{v}; }
Value make(bool v) { return Value{v}; }
Value make(std::string v) { return Value{std::move(v)}; }
Value make(Position v) { return Value{v}; }

class Interpreter {
public:
    Interpreter(craftworld::World& world, const ApiRegistry& reg, const Function& entry, const ExecOptions& opt,
                ExecutionOutcome& out)
        : world_(world), reg_(reg), entry_(entry), opt_(opt), out_(out)
    {
    }

    void run()
    {
        if (entry_.params.size() > 0 && signature_of(entry_).required() > 0)
            fail(ErrorKind::runtime, fmt::format("entry function '{}' must not require arguments", entry_.name),
                 entry_.loc);
        call_function(entry_, {}, entry_.loc);
    }

private:
    struct Frame {
        std::string function;
        SourceLoc at; // location currently executing in this frame
        std::vector<std::map<std::string, Value>> scopes;
    };

    [[noreturn]] void fail(ErrorKind kind, std::string message, SourceLoc loc)
    {
        Fault f{kind, std::move(message), loc, {}};
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
            auto where = it == frames_.rbegin() ? loc : it->at;
            f.trace.push_back(fmt::format("{} (line {}, column {})", it->function, where.line, where.column));
        }
        throw f;
    }

    void tick_statement(SourceLoc loc)
    {
        if (++statements_ > opt_.statement_limit)
            fail(ErrorKind::budget_exceeded,
                 fmt::format("statement limit of {} exceeded; loops must make progress", opt_.statement_limit), loc);
    }

    Value call_function(const Function& fn, std::vector<Value> args, SourceLoc call_loc)
    {
        if (frames_.size() >= kMaxCallDepth)
            fail(ErrorKind::runtime, "call depth exceeded", call_loc);
        if (args.size() > fn.params.size())
            fail(ErrorKind::runtime, fmt::format("'{}' takes at most {} arguments, got {}", fn.name, fn.params.size(),
                                                 args.size()),
                 call_loc);
        frames_.push_back({fn.name, fn.loc, {{}}});
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
            const auto& param = fn.params[i];
            Value v;
            if (i < args.size())
                v = std::move(args[i]);
            else if (param.default_value)
                v = eval(*param.default_value);
            else
                fail(ErrorKind::runtime, fmt::format("missing argument '{}' for '{}'", param.name, fn.name), call_loc);
            frames_.back().scopes.back()[param.name] = std::move(v);
        }
        returned_ = false;
        return_value_ = {};
        exec_block(fn.body);
        Value result = returned_ ? std::move(return_value_) : Value{};
        returned_ = false;
        frames_.pop_back();
        return result;
    }

    void exec_block(const std::vector<Stmt>& body)
    {
        frames_.back().scopes.emplace_back();
        for (const auto& s : body) {
            exec(s);
            if (returned_)
                break;
        }
        frames_.back().scopes.pop_back();
    }

    Value* lookup(const std::string& name)
    {
        auto& scopes = frames_.back().scopes;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
            if (auto found = it->find(name); found != it->end())
                return &found->second;
        return nullptr;
    }

    void exec(const Stmt& s)
    {
        frames_.back().at = s.loc;
        tick_statement(s.loc);
        switch (s.kind) {
        case StmtKind::let: {
            auto v = eval(*s.expr);
            frames_.back().scopes.back()[s.name] = std::move(v);
            break;
        }
        case StmtKind::assign: {
            auto v = eval(*s.expr);
            auto* slot = lookup(s.name);
            if (!slot)
                fail(ErrorKind::runtime, fmt::format("assignment to undeclared variable '{}'", s.name), s.loc);
            *slot = std::move(v);
            break;
        }
        case StmtKind::expr: eval(*s.expr); break;
        case StmtKind::return_value:
            return_value_ = s.expr ? eval(*s.expr) : Value{};
            returned_ = true;
            break;
        case StmtKind::if_else: {
            auto cond = eval(*s.expr);
            if (as_bool(cond, "if condition", s.expr->loc))
                exec_block(s.body);
            else
                exec_block(s.else_body);
            break;
        }
        case StmtKind::repeat:
            for (long long i = 0; i < s.count && !returned_; ++i) {
                tick_statement(s.loc);
                exec_block(s.body);
            }
            break;
        }
    }

    // ---- value coercions ----

    [[noreturn]] void type_error(const Value& v, std::string_view want, std::string_view what, SourceLoc loc)
    {
        fail(ErrorKind::runtime, fmt::format("{} must be {}, got {} {}", what, want, v.type_name(), v.to_text()), loc);
    }
    bool as_bool(const Value& v, std::string_view what, SourceLoc loc)
    {
        if (auto* b = std::get_if<bool>(&v.data))
            return *b;
        type_error(v, "a bool", what, loc);
    }
    long long as_int(const Value& v, std::string_view what, SourceLoc loc)
    {
        if (auto* i = std::get_if<long long>(&v.data))
            return *i;
        type_error(v, "an int", what, loc);
    }
    std::string as_string(const Value& v, std::string_view what, SourceLoc loc)
    {
        if (auto* s = std::get_if<std::string>(&v.data))
            return *s;
        type_error(v, "a string", what, loc);
    }
    Position as_pos(const Value& v, std::string_view what, SourceLoc loc)
    {
        if (auto* p = std::get_if<Position>(&v.data))
            return *p;
        type_error(v, "a position", what, loc);
    }
    Inventory as_items(const Value& v, std::string_view what, SourceLoc loc)
    {
        if (auto* m = std::get_if<Inventory>(&v.data))
            return *m;
        type_error(v, "an item map", what, loc);
    }
    int as_count(const Value& v, std::string_view what, SourceLoc loc)
    {
        auto n = as_int(v, what, loc);
        if (n < -1'000'000'000LL || n > 1'000'000'000LL)
            fail(ErrorKind::runtime, fmt::format("{} is out of range", what), loc);
        return static_cast<int>(n);
    }

    // ---- expressions ----

    Value eval(const Expr& e)
    {
        switch (e.kind) {
        case ExprKind::int_literal: return make(e.int_value);
        case ExprKind::string_literal: return make(e.text);
        case ExprKind::bool_literal: return make(e.bool_value);
        case ExprKind::identifier: {
            auto* v = lookup(e.text);
            if (!v)
                fail(ErrorKind::runtime, fmt::format("undefined variable '{}'", e.text), e.loc);
            return *v;
        }
        case ExprKind::member: {
            auto p = as_pos(eval(e.children[0]), "the object of '." + e.text + "'", e.loc);
            if (e.text == "x")
                return make(static_cast<long long>(p.x));
            if (e.text == "y")
                return make(static_cast<long long>(p.y));
            if (e.text == "z")
                return make(static_cast<long long>(p.z));
            fail(ErrorKind::runtime, fmt::format("unknown field '{}'", e.text), e.loc);
        }
        case ExprKind::unary: {
            auto v = eval(e.children[0]);
            if (e.text == "!")
                return make(!as_bool(v, "operand of '!'", e.loc));
            return make(-as_int(v, "operand of '-'", e.loc));
        }
        case ExprKind::binary: return binary(e);
        case ExprKind::map_literal: {
            Inventory items;
            for (std::size_t i = 0; i < e.keys.size(); ++i)
                items[e.keys[i]] = as_count(eval(e.children[i]), "item count", e.children[i].loc);
            return Value{items};
        }
        case ExprKind::call: return call(e);
        }
        return {};
    }

    Value binary(const Expr& e)
    {
        const auto& op = e.text;
        if (op == "&&" || op == "||") {
            bool lhs = as_bool(eval(e.children[0]), "operand of '" + op + "'", e.loc);
            if (op == "&&" && !lhs)
                return make(false);
            if (op == "||" && lhs)
                return make(true);
            return make(as_bool(eval(e.children[1]), "operand of '" + op + "'", e.loc));
        }
        auto a = eval(e.children[0]);
        auto b = eval(e.children[1]);
        if (op == "==")
            return make(a == b);
        if (op == "!=")
            return make(!(a == b));
        bool a_str = std::holds_alternative<std::string>(a.data);
        bool b_str = std::holds_alternative<std::string>(b.data);
        if (op == "+" && (a_str || b_str))
            return make(a.to_text() + b.to_text());
        auto* pa = std::get_if<Position>(&a.data);
        auto* pb = std::get_if<Position>(&b.data);
        if (pa && pb && (op == "+" || op == "-"))
            return make(op == "+" ? *pa + *pb : *pa - *pb);
        auto x = as_int(a, "left operand of '" + op + "'", e.loc);
        auto y = as_int(b, "right operand of '" + op + "'", e.loc);
        if (op == "+")
            return make(x + y);
        if (op == "-")
            return make(x - y);
        if (op == "*")
            return make(x * y);
        if (op == "/" || op == "%") {
            if (y == 0)
                fail(ErrorKind::runtime, "division by zero", e.loc);
            return make(op == "/" ? x / y : x % y);
        }
        if (op == "<")
            return make(x < y);
        if (op == "<=")
            return make(x <= y);
        if (op == ">")
            return make(x > y);
        if (op == ">=")
            return make(x >= y);
        fail(ErrorKind::runtime, fmt::format("unknown operator '{}'", op), e.loc);
    }

    Value call(const Expr& e)
    {
        const Function* skill = e.text == entry_.name ? &entry_ : reg_.skill(e.text);
        const Signature* sig = reg_.find(e.text);
        if (sig && sig->kind != CallableKind::skill)
            skill = nullptr;
        if (!sig && !skill)
            fail(ErrorKind::runtime, fmt::format("unknown callable '{}'", e.text), e.loc);
        if (skill) {
            std::vector<Value> args;
            for (const auto& a : e.children)
                args.push_back(eval(a));
            frames_.back().at = e.loc;
            return call_function(*skill, std::move(args), e.loc);
        }
        if (e.children.size() < sig->required() || e.children.size() > sig->params.size())
            fail(ErrorKind::runtime,
                 fmt::format("'{}' takes {} to {} arguments, got {}", e.text, sig->required(), sig->params.size(),
                             e.children.size()),
                 e.loc);
        if (sig->kind == CallableKind::query)
            return query(e);
        return primitive(e);
    }

    Value arg(const Expr& e, std::size_t i, Value fallback = {})
    {
        return i < e.children.size() ? eval(e.children[i]) : std::move(fallback);
    }

    Value query(const Expr& e)
    {
        const auto& name = e.text;
        auto loc = e.loc;
        if (name == "inventory_count")
            return make(static_cast<long long>(world_.inventory_count(as_string(arg(e, 0), "item", loc))));
        if (name == "block_nearby")
            return make(world_.block_nearby(as_string(arg(e, 0), "block name", loc)));
        if (name == "entity_nearby")
            return make(world_.entity_nearby(as_string(arg(e, 0), "mob name", loc)));
        if (name == "position")
            return make(world_.position());
        if (name == "pos")
            return make(Position{as_count(arg(e, 0), "x", loc), as_count(arg(e, 1), "y", loc),
                                 as_count(arg(e, 2), "z", loc)});
        if (name == "block_at")
            return make(world_.block_at(as_pos(arg(e, 0), "position", loc)));
        if (name == "free_spot")
            return make(free_spot());
        if (name == "tag_count" || name == "first_held" || name == "first_nearby") {
            auto tag = as_string(arg(e, 0), "tag", loc);
            const auto& reg = world_.registry();
            const auto& members = reg.tag_members(tag);
            if (members.empty())
                fail(ErrorKind::runtime, fmt::format("unknown item kind '{}'", tag), loc);
            long long total = 0;
            for (const auto& m : members) {
                if (name == "first_held" && world_.inventory_count(m) > 0)
                    return make(m);
                if (name == "first_nearby" && world_.block_nearby(m))
                    return make(m);
                total += world_.inventory_count(m);
            }
            return name == "tag_count" ? make(total) : make(std::string());
        }
        if (name == "replace") {
            auto text = as_string(arg(e, 0), "text", loc);
            auto from = as_string(arg(e, 1), "from", loc);
            if (from.empty())
                fail(ErrorKind::runtime, "replace: from must not be empty", loc);
            return make(util::replace_all(text, from, as_string(arg(e, 2), "to", loc)));
        }
        fail(ErrorKind::runtime, fmt::format("unknown callable '{}'", name), loc);
    }

    Position free_spot() const
    {
        const auto& reg = world_.registry();
        auto me = world_.position();
        auto solid = [&](Position p) {
            auto name = world_.block_at(p);
            const auto* info = reg.block(name);
            return info && !info->replaceable;
        };
        for (int r = 1; r <= 4; ++r)
            for (int dz = -r; dz <= r; ++dz)
                for (int dx = -r; dx <= r; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dz)) != r)
                        continue;
                    for (int dy : {0, 1, -1, 2, -2}) {
                        Position p{me.x + dx, me.y + dy, me.z + dz};
                        if (world_.in_bounds(p) && world_.block_at(p) == "air" && solid(p - Position{0, 1, 0}))
                            return p;
                    }
                }
        return me + Position{0, 2, 0};
    }

    Value primitive(const Expr& e)
    {
        const auto& name = e.text;
        auto loc = e.loc;
        frames_.back().at = loc;
        std::vector<Value> args;
        const auto* sig = reg_.find(name);
        for (std::size_t i = 0; i < e.children.size(); ++i)
            args.push_back(sig->params[i].type == ParamType::predicate ? Value{} : eval(e.children[i]));
        auto argv = [&](std::size_t i, Value fallback = {}) { return i < args.size() ? args[i] : fallback; };

        if (out_.steps_used >= opt_.budget)
            fail(ErrorKind::budget_exceeded,
                 fmt::format("execution budget of {} primitive calls exhausted", opt_.budget), loc);
        ++out_.steps_used;

        std::optional<Fault> predicate_fault;
        craftworld::ActionResult r;
        if (name == "mineBlock") {
            r = world_.mine_block(as_string(argv(0), "block name", loc), as_count(argv(1, make(1LL)), "count", loc));
        } else if (name == "craftItem") {
            r = world_.craft_item(as_string(argv(0), "item name", loc), as_count(argv(1, make(1LL)), "count", loc));
        } else if (name == "smeltItem") {
            r = world_.smelt_item(as_string(argv(0), "item name", loc),
                                  as_string(argv(1, make(std::string("coal"))), "fuel", loc),
                                  as_count(argv(2, make(1LL)), "count", loc));
        } else if (name == "placeItem") {
            r = world_.place_item(as_string(argv(0), "item name", loc), as_pos(argv(1), "position", loc));
        } else if (name == "killMob") {
            r = world_.kill_mob(as_string(argv(0), "mob name", loc), as_count(argv(1, make(300LL)), "timeout", loc));
        } else if (name == "exploreUntil") {
            auto dir_text = as_string(argv(0), "direction", loc);
            auto dir = craftworld::Direction::parse(dir_text);
            if (!dir)
                fail(ErrorKind::runtime,
                     fmt::format("unknown direction '{}'; use east, west, north, south or a diagonal", dir_text), loc);
            auto max_time = as_count(argv(1), "maxTime", loc);
            const Expr& pred = e.children[2];
            auto stop = [&](const craftworld::World&) {
                if (predicate_fault)
                    return true;
                try {
                    return as_bool(eval(pred), "stop condition", pred.loc);
                } catch (Fault& f) {
                    predicate_fault = std::move(f);
                    return true;
                }
            };
            r = world_.explore_until(*dir, max_time, stop);
        } else if (name == "goto") {
            r = world_.go_to(as_pos(argv(0), "position", loc), as_count(argv(1, make(1LL)), "range", loc));
        } else if (name == "getItemFromChest" || name == "depositItemIntoChest") {
            r = world_.chest_transfer(as_pos(argv(0), "chest position", loc), as_items(argv(1), "items", loc),
                                      name == "getItemFromChest" ? craftworld::TransferDirection::get
                                                                 : craftworld::TransferDirection::deposit);
        } else if (name == "equip") {
            auto slot_text = as_string(argv(1, make(std::string("hand"))), "slot", loc);
            auto slot = craftworld::parse_equip_slot(slot_text);
            if (!slot)
                fail(ErrorKind::runtime, fmt::format("unknown equipment slot '{}'", slot_text), loc);
            r = world_.equip(as_string(argv(0), "item name", loc), *slot);
        } else if (name == "consume") {
            r = world_.consume(as_string(argv(0), "item name", loc));
        } else if (name == "chat") {
            r = world_.chat(argv(0).to_text());
        } else {
            fail(ErrorKind::runtime, fmt::format("unknown callable '{}'", name), loc);
        }

        PrimitiveCall record{name, {}, r.ok, r.feedback, r.error.value_or("")};
        for (const auto& a : args)
            record.args.push_back(a.to_text());
        out_.primitive_trace.push_back(std::move(record));
        out_.feedback.insert(out_.feedback.end(), r.feedback.begin(), r.feedback.end());
        if (predicate_fault)
            throw *predicate_fault;
        if (r.error)
            fail(ErrorKind::runtime, *r.error, loc);
        return make(r.ok);
    }

    craftworld::World& world_;
    const ApiRegistry& reg_;
    const Function& entry_;
    const ExecOptions& opt_;
    ExecutionOutcome& out_;
    std::vector<Frame> frames_;
    long long statements_ = 0;
    bool returned_ = false;
    Value return_value_;
};

} // namespace

std::string Value::type_name() const
{
    switch (data.index()) {
    case 0: return "null";
    case 1: return "int";
    case 2: return "bool";
    case 3: return "string";
    case 4: return "position";
    default: return "item map";
    }
}

std::string Value::to_text() const
{
    switch (data.index()) {
    case 0: return "null";
    case 1: return std::to_string(std::get<long long>(data));
    case 2: return std::get<bool>(data) ? "true" : "false";
    case 3: return std::get<std::string>(data);
    case 4: return craftworld::to_string(std::get<Position>(data));
    default: {
        std::vector<std::string> parts;
        for (const auto& [k, v] : std::get<Inventory>(data))
            parts.push_back(fmt::format("\"{}\": {}", k, v));
        return "{" + util::join(parts, ", ") + "}";
    }
    }
}

std::string_view to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::static_check: return "static";
    case ErrorKind::runtime: return "runtime";
    case ErrorKind::budget_exceeded: return "budget_exceeded";
    }
    return "runtime";
}

std::string ExecutionError::render() const
{
    static const std::map<ErrorKind, const char*> labels{{ErrorKind::syntax, "Syntax error"},
                                                         {ErrorKind::static_check, "Static error"},
                                                         {ErrorKind::runtime, "Runtime error"},
                                                         {ErrorKind::budget_exceeded, "Budget exceeded"}};
    std::string out = fmt::format("{}: {}", labels.at(kind), message);
    for (const auto& frame : trace)
        out += "\n    at " + frame;
    return out;
}

ExecutionOutcome execute(const Function& fn, craftworld::World& world, const ApiRegistry& registry,
                         const ExecOptions& options)
{
    ExecutionOutcome out;
    world.begin_program();
    try {
        Interpreter(world, registry, fn, options, out).run();
    } catch (const Fault& f) {
        out.error = ExecutionError{f.kind, f.message, f.loc, f.trace};
    }
    if (options.recycle)
        world.recycle_stations();
    out.end_state = world.observe();
    return out;
}

ExecutionOutcome run_source(std::string_view source, craftworld::World& world, const ApiRegistry& registry,
                            const ExecOptions& options)
{
    Function fn;
    try {
        fn = parse(source);
    } catch (const ParseError& e) {
        ExecutionOutcome out;
        out.error = ExecutionError{ErrorKind::syntax, e.what(), e.loc(), {}};
        out.end_state = world.observe();
        return out;
    }
    auto errors = analyze(fn, registry);
    if (!errors.empty()) {
        ExecutionOutcome out;
        std::vector<std::string> lines;
        for (const auto& err : errors)
            lines.push_back(render(err));
        out.error = ExecutionError{ErrorKind::static_check, util::join(lines, "; "), errors.front().loc, {}};
        out.end_state = world.observe();
        return out;
    }
    return execute(fn, world, registry, options);
}

} // namespace voyager::skillscript

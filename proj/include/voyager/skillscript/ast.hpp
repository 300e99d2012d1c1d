// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace voyager::skillscript {

/// Location in the source text, 1-based. Ignored by AST equality so that
/// print(parse(s)) compares equal to parse(s).
struct SourceLoc {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class ExprKind {
    int_literal,
    string_literal,
    bool_literal,
    identifier,
    call,    // text = callee, children = args
    member,  // text = field, children[0] = object
    unary,   // text = op, children[0]
    binary,  // text = op, children[0..1]
    map_literal, // keys[i] -> children[i]
};

struct Expr {
    ExprKind kind = ExprKind::int_literal;
    std::string text;
    long long int_value = 0;
    bool bool_value = false;
    std::vector<Expr> children;
    std::vector<std::string> keys;
    SourceLoc loc;

    friend bool operator==(const Expr&, const Expr&) = default;
};

enum class StmtKind { let, assign, expr, if_else, repeat, return_value };

struct Stmt {
    StmtKind kind = StmtKind::expr;
    std::string name;          // let / assign target
    std::optional<Expr> expr;  // value, condition, call, or return value
    long long count = 0;       // repeat bound
    std::vector<Stmt> body;    // then-branch or loop body
    std::vector<Stmt> else_body;
    SourceLoc loc;

    friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Param {
    std::string name;
    std::optional<Expr> default_value;

    friend bool operator==(const Param&, const Param&) = default;
};

struct Function {
    std::string name;
    std::vector<Param> params;
    std::vector<Stmt> body;
    SourceLoc loc;

    friend bool operator==(const Function&, const Function&) = default;
};

} // namespace voyager::skillscript

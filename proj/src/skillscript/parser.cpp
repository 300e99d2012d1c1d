// SPDX-License-Identifier: Apache-2.0
#include "voyager/skillscript/parser.hpp"

#include "voyager/util/text.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <map>
#include <vector>

namespace voyager::skillscript {

namespace {

enum class Tok { identifier, keyword, integer, string, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    long long value = 0;
    SourceLoc loc;
};

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "string literal";
    case Tok::integer: return "integer " + t.text;
    default: return "'" + t.text + "'";
    }
}

const std::set<std::string> kKeywords{"fn", "let", "if", "else", "repeat", "return", "true", "false"};

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n')
                advance();
            continue;
        }
        Token t;
        t.loc = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.text = std::string(src.substr(i, j - i));
            t.kind = kKeywords.count(t.text) ? Tok::keyword : Tok::identifier;
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            t.kind = Tok::integer;
            t.text = std::string(src.substr(i, j - i));
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
            if (ec != std::errc{})
                throw ParseError(t.loc, {"integer"}, t.text, "integer literal out of range");
            advance(j - i);
        } else if (c == '"') {
            t.kind = Tok::string;
            advance();
            while (true) {
                if (i >= src.size() || src[i] == '\n')
                    throw ParseError(t.loc, {"'\"'"}, "end of line", "unterminated string literal");
                char d = src[i];
                if (d == '"') {
                    advance();
                    break;
                }
                if (d == '\\' && i + 1 < src.size()) {
                    char e = src[i + 1];
                    std::map<char, char> escapes{{'n', '\n'}, {'t', '\t'}, {'"', '"'}, {'\\', '\\'}};
                    auto it = escapes.find(e);
                    if (it == escapes.end())
                        throw ParseError({line, col}, {"escape sequence"}, std::string(1, e), "unknown escape");
                    t.text += it->second;
                    advance(2);
                    continue;
                }
                t.text += d;
                advance();
            }
        } else {
            static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
            t.kind = Tok::punct;
            for (const char* op : two) {
                if (src.substr(i, 2) == op) {
                    t.text = op;
                    break;
                }
            }
            if (t.text.empty()) {
                if (std::string_view("(){},;:.=<>+-*/%!").find(c) == std::string_view::npos)
                    throw ParseError(t.loc, {"token"}, std::string(1, c), "unexpected character");
                t.text = std::string(1, c);
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.loc = {line, col};
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Function program()
    {
        if (peek().kind == Tok::end)
            throw ParseError(peek().loc, {"'fn'"}, describe(peek()), "program has no function");
        auto fn = function();
        if (peek().kind != Tok::end) {
            if (is_kw("fn"))
                throw ParseError(peek().loc, {"end of input"}, describe(peek()),
                                 "a program must define exactly one function");
            fail({"end of input"});
        }
        return fn;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
    }
    bool is_kw(std::string_view k) const { return peek().kind == Tok::keyword && peek().text == k; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(std::set<std::string> expected, const std::string& detail = {}) const
    {
        throw ParseError(peek().loc, std::move(expected), describe(peek()), detail);
    }

    Token expect_punct(std::string_view p)
    {
        if (!is_punct(p))
            fail({fmt::format("'{}'", p)});
        return take();
    }
    Token expect_kw(std::string_view k)
    {
        if (!is_kw(k))
            fail({fmt::format("'{}'", k)});
        return take();
    }
    Token expect_ident()
    {
        if (peek().kind != Tok::identifier)
            fail({"identifier"});
        return take();
    }

    Function function()
    {
        Function fn;
        fn.loc = expect_kw("fn").loc;
        fn.name = expect_ident().text;
        expect_punct("(");
        if (!is_punct(")")) {
            while (true) {
                Param p;
                p.name = expect_ident().text;
                if (is_punct("=")) {
                    take();
                    p.default_value = expression();
                }
                fn.params.push_back(std::move(p));
                if (is_punct(",")) {
                    take();
                    continue;
                }
                if (!is_punct(")"))
                    fail({"','", "')'", "'='"});
                break;
            }
        }
        expect_punct(")");
        fn.body = block();
        return fn;
    }

    std::vector<Stmt> block()
    {
        expect_punct("{");
        std::vector<Stmt> out;
        while (!is_punct("}")) {
            if (peek().kind == Tok::end)
                fail({"'}'", "statement"});
            out.push_back(statement());
        }
        take();
        return out;
    }

    Stmt statement()
    {
        Stmt s;
        s.loc = peek().loc;
        if (is_kw("let")) {
            take();
            s.kind = StmtKind::let;
            s.name = expect_ident().text;
            expect_punct("=");
            s.expr = expression();
            expect_punct(";");
        } else if (is_kw("if")) {
            return if_statement();
        } else if (is_kw("repeat")) {
            take();
            s.kind = StmtKind::repeat;
            if (peek().kind != Tok::integer)
                fail({"integer literal"}, "repeat needs a literal bound");
            s.count = take().value;
            if (s.count < 1)
                throw ParseError(s.loc, {"positive integer"}, std::to_string(s.count), "repeat bound must be positive");
            s.body = block();
        } else if (is_kw("return")) {
            take();
            s.kind = StmtKind::return_value;
            if (!is_punct(";"))
                s.expr = expression();
            expect_punct(";");
        } else if (peek().kind == Tok::identifier && is_punct("=", 1)) {
            s.kind = StmtKind::assign;
            s.name = take().text;
            take();
            s.expr = expression();
            expect_punct(";");
        } else if (peek().kind == Tok::identifier || peek().kind == Tok::integer || peek().kind == Tok::string ||
                   is_punct("(") || is_punct("!") || is_punct("-") || is_kw("true") || is_kw("false")) {
            s.kind = StmtKind::expr;
            s.expr = expression();
            expect_punct(";");
        } else {
            fail({"'let'", "'if'", "'repeat'", "'return'", "expression", "'}'"});
        }
        return s;
    }

    Stmt if_statement()
    {
        Stmt s;
        s.kind = StmtKind::if_else;
        s.loc = expect_kw("if").loc;
        s.expr = expression();
        s.body = block();
        if (is_kw("else")) {
            take();
            if (is_kw("if"))
                s.else_body.push_back(if_statement());
            else if (is_punct("{"))
                s.else_body = block();
            else
                fail({"'if'", "'{'"});
        }
        return s;
    }

    // Precedence climbing over binary operators.
    static int precedence(std::string_view op)
    {
        if (op == "||")
            return 1;
        if (op == "&&")
            return 2;
        if (op == "==" || op == "!=")
            return 3;
        if (op == "<" || op == "<=" || op == ">" || op == ">=")
            return 4;
        if (op == "+" || op == "-")
            return 5;
        if (op == "*" || op == "/" || op == "%")
            return 6;
        return 0;
    }

    Expr expression(int min_prec = 1)
    {
        Expr lhs = unary();
        while (peek().kind == Tok::punct) {
            int prec = precedence(peek().text);
            if (prec < min_prec || prec == 0)
                break;
            Token op = take();
            Expr rhs = expression(prec + 1);
            Expr bin;
            bin.kind = ExprKind::binary;
            bin.text = op.text;
            bin.loc = op.loc;
            bin.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(bin);
        }
        return lhs;
    }

    Expr unary()
    {
        if (is_punct("!") || is_punct("-")) {
            Token op = take();
            Expr e;
            e.kind = ExprKind::unary;
            e.text = op.text;
            e.loc = op.loc;
            e.children.push_back(unary());
            return e;
        }
        return postfix();
    }

    Expr postfix()
    {
        Expr e = primary();
        while (is_punct(".")) {
            Token dot = take();
            Expr m;
            m.kind = ExprKind::member;
            m.text = expect_ident().text;
            m.loc = dot.loc;
            m.children.push_back(std::move(e));
            e = std::move(m);
        }
        return e;
    }

    Expr primary()
    {
        Expr e;
        e.loc = peek().loc;
        const auto& t = peek();
        if (t.kind == Tok::integer) {
            e.kind = ExprKind::int_literal;
            e.int_value = take().value;
        } else if (t.kind == Tok::string) {
            e.kind = ExprKind::string_literal;
            e.text = take().text;
        } else if (is_kw("true") || is_kw("false")) {
            e.kind = ExprKind::bool_literal;
            e.bool_value = take().text == "true";
        } else if (t.kind == Tok::identifier) {
            e.text = take().text;
            e.kind = ExprKind::identifier;
            if (is_punct("(")) {
                e.kind = ExprKind::call;
                take();
                if (!is_punct(")")) {
                    while (true) {
                        e.children.push_back(expression());
                        if (is_punct(",")) {
                            take();
                            continue;
                        }
                        if (!is_punct(")"))
                            fail({"','", "')'"});
                        break;
                    }
                }
                expect_punct(")");
            }
        } else if (is_punct("(")) {
            take();
            e = expression();
            expect_punct(")");
        } else if (is_punct("{")) {
            take();
            e.kind = ExprKind::map_literal;
            if (!is_punct("}")) {
                while (true) {
                    if (peek().kind != Tok::string)
                        fail({"string literal"}, "map keys are item names in quotes");
                    e.keys.push_back(take().text);
                    expect_punct(":");
                    e.children.push_back(expression());
                    if (is_punct(",")) {
                        take();
                        continue;
                    }
                    if (!is_punct("}"))
                        fail({"','", "'}'"});
                    break;
                }
            }
            expect_punct("}");
        } else {
            fail({"expression"});
        }
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

int expr_precedence(const Expr& e)
{
    static const std::map<std::string, int, std::less<>> table{
        {"||", 1}, {"&&", 2}, {"==", 3}, {"!=", 3}, {"<", 4}, {"<=", 4}, {">", 4},
        {">=", 4}, {"+", 5},  {"-", 5},  {"*", 6},  {"/", 6},  {"%", 6},
    };
    if (e.kind == ExprKind::binary)
        return table.at(e.text);
    if (e.kind == ExprKind::unary)
        return 7;
    return 8;
}

void print_block(const std::vector<Stmt>& body, int indent, std::string& out);

void print_stmt(const Stmt& s, int indent, std::string& out)
{
    std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    switch (s.kind) {
    case StmtKind::let: out += pad + "let " + s.name + " = " + print(*s.expr) + ";\n"; break;
    case StmtKind::assign: out += pad + s.name + " = " + print(*s.expr) + ";\n"; break;
    case StmtKind::expr: out += pad + print(*s.expr) + ";\n"; break;
    case StmtKind::return_value: out += pad + (s.expr ? "return " + print(*s.expr) : "return") + ";\n"; break;
    case StmtKind::repeat:
        out += pad + "repeat " + std::to_string(s.count) + " ";
        print_block(s.body, indent, out);
        out += "\n";
        break;
    case StmtKind::if_else: {
        out += pad;
        const Stmt* cur = &s;
        while (true) {
            out += "if " + print(*cur->expr) + " ";
            print_block(cur->body, indent, out);
            if (cur->else_body.empty())
                break;
            if (cur->else_body.size() == 1 && cur->else_body[0].kind == StmtKind::if_else) {
                out += " else ";
                cur = &cur->else_body[0];
                continue;
            }
            out += " else ";
            print_block(cur->else_body, indent, out);
            break;
        }
        out += "\n";
        break;
    }
    }
}

void print_block(const std::vector<Stmt>& body, int indent, std::string& out)
{
    out += "{\n";
    for (const auto& s : body)
        print_stmt(s, indent + 1, out);
    out += std::string(static_cast<std::size_t>(indent) * 4, ' ') + "}";
}

} // namespace

ParseError::ParseError(SourceLoc loc, std::set<std::string> expected, std::string found, const std::string& detail)
    : std::runtime_error(fmt::format("line {}, column {}: {}expected {}, found {}", loc.line, loc.column,
                                     detail.empty() ? "" : detail + "; ",
                                     expected.size() == 1 ? *expected.begin()
                                                          : "one of " + util::join(std::vector<std::string>(expected.begin(), expected.end()), ", "),
                                     found)),
      loc_(loc), expected_(std::move(expected)), found_(std::move(found))
{
}

Function parse(std::string_view source)
{
    Parser p(lex(source));
    return p.program();
}

std::string print(const Expr& e)
{
    switch (e.kind) {
    case ExprKind::int_literal: return std::to_string(e.int_value);
    case ExprKind::string_literal: return quote(e.text);
    case ExprKind::bool_literal: return e.bool_value ? "true" : "false";
    case ExprKind::identifier: return e.text;
    case ExprKind::call: {
        std::vector<std::string> args;
        for (const auto& a : e.children)
            args.push_back(print(a));
        return e.text + "(" + util::join(args, ", ") + ")";
    }
    case ExprKind::member: {
        auto inner = print(e.children[0]);
        if (expr_precedence(e.children[0]) < 8)
            inner = "(" + inner + ")";
        return inner + "." + e.text;
    }
    case ExprKind::unary: {
        auto inner = print(e.children[0]);
        if (expr_precedence(e.children[0]) < 7)
            inner = "(" + inner + ")";
        return e.text + inner;
    }
    case ExprKind::binary: {
        int prec = expr_precedence(e);
        auto lhs = print(e.children[0]);
        auto rhs = print(e.children[1]);
        if (expr_precedence(e.children[0]) < prec)
            lhs = "(" + lhs + ")";
        if (expr_precedence(e.children[1]) <= prec)
            rhs = "(" + rhs + ")";
        return lhs + " " + e.text + " " + rhs;
    }
    case ExprKind::map_literal: {
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < e.keys.size(); ++i)
            parts.push_back(quote(e.keys[i]) + ": " + print(e.children[i]));
        return "{" + util::join(parts, ", ") + "}";
    }
    }
    return {};
}

std::string print(const Function& fn)
{
    std::vector<std::string> params;
    for (const auto& p : fn.params)
        params.push_back(p.default_value ? p.name + " = " + print(*p.default_value) : p.name);
    std::string out = "fn " + fn.name + "(" + util::join(params, ", ") + ") ";
    print_block(fn.body, 0, out);
    out += "\n";
    return out;
}

} // namespace voyager::skillscript

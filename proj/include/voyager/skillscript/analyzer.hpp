// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/skillscript/ast.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace voyager::skillscript {

enum class ParamType { any, string, integer, boolean, position, items, predicate };

std::string_view to_string(ParamType t);

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::any;
    std::optional<std::string> default_text; // printed default, for docs
};

enum class CallableKind { primitive, query, skill };

struct Signature {
    std::string name;
    std::vector<ParamSpec> params;
    std::string doc;
    CallableKind kind = CallableKind::primitive;

    std::size_t required() const;
    std::string render() const;
};

/// Callables visible to a program: environment primitives, pure queries and library skills.
class ApiRegistry {
public:
    /// Primitives and queries only, in canonical order.
    static ApiRegistry standard();

    /// Adds or replaces a skill. The signature is derived from the function header.
    void add_skill(std::shared_ptr<const Function> fn, std::string doc = {});

    const Signature* find(std::string_view name) const;
    const Function* skill(std::string_view name) const;
    std::vector<std::string> skill_names() const;

    const std::vector<Signature>& primitives() const { return primitives_; }
    const std::vector<Signature>& queries() const { return queries_; }

private:
    std::vector<Signature> primitives_;
    std::vector<Signature> queries_;
    std::map<std::string, Signature, std::less<>> skill_sigs_;
    std::map<std::string, std::shared_ptr<const Function>, std::less<>> skills_;
};

/// Signature of a user function as it appears in docs and the registry.
Signature signature_of(const Function& fn, std::string doc = {});

struct StaticError {
    std::string message;
    SourceLoc loc;
};

/// Empty iff every call resolves with a valid arity, every variable is bound before use,
/// explore predicates are pure, and the skill call graph is acyclic.
std::vector<StaticError> analyze(const Function& fn, const ApiRegistry& registry);

std::string render(const StaticError& e);

/// Upper bound on primitive calls the program can make. Requires analyze() == {}.
long long static_call_bound(const Function& fn, const ApiRegistry& registry);

/// Stable listing: primitives in canonical order, queries, then skills alphabetically.
std::string render_api_docs(const ApiRegistry& registry);

} // namespace voyager::skillscript

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/craftworld/world.hpp"
#include "voyager/skillscript/analyzer.hpp"
#include "voyager/skillscript/ast.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace voyager::skillscript {

struct Value {
    std::variant<std::monostate, long long, bool, std::string, craftworld::Position, craftworld::Inventory> data;

    std::string type_name() const;
    std::string to_text() const;
    friend bool operator==(const Value&, const Value&) = default;
};

struct PrimitiveCall {
    std::string name;
    std::vector<std::string> args;
    bool ok = false;
    std::vector<std::string> feedback;
    std::string error;
};

enum class ErrorKind { syntax, static_check, runtime, budget_exceeded };
std::string_view to_string(ErrorKind k);

struct ExecutionError {
    ErrorKind kind = ErrorKind::runtime;
    std::string message;
    SourceLoc loc;
    std::vector<std::string> trace; // innermost frame first: "craftStick (line 3, column 5)"

    /// Multi-line text fed back into the next code-generation prompt.
    std::string render() const;
};

struct ExecutionOutcome {
    std::vector<std::string> feedback; // chat log, in emission order
    std::optional<ExecutionError> error;
    std::vector<PrimitiveCall> primitive_trace;
    craftworld::AgentState end_state;
    int steps_used = 0;
};

struct ExecOptions {
    int budget = 2000;                     // primitive calls
    long long statement_limit = 1'000'000; // guards loops that never call a primitive
    bool recycle = true;
};

/// Runs the entry function against the world. Stations placed by the program are
/// recycled at the end, whether or not it failed.
ExecutionOutcome execute(const Function& fn, craftworld::World& world, const ApiRegistry& registry,
                         const ExecOptions& options = {});

/// parse + analyze + execute. Syntax and static errors are reported as execution errors
/// without touching the world.
ExecutionOutcome run_source(std::string_view source, craftworld::World& world, const ApiRegistry& registry,
                            const ExecOptions& options = {});

} // namespace voyager::skillscript

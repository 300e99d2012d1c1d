// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/skillscript/ast.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voyager::skillscript {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLoc loc, std::set<std::string> expected, std::string found, const std::string& detail = {});

    const SourceLoc& loc() const { return loc_; }
    const std::set<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    SourceLoc loc_;
    std::set<std::string> expected_;
    std::string found_;
};

/// Parses a source text holding exactly one `fn` definition.
Function parse(std::string_view source);

/// Canonical source text; parse(print(f)) == f.
std::string print(const Function& fn);
std::string print(const Expr& expr);

} // namespace voyager::skillscript

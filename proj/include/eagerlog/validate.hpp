#pragma once

#include <map>
#include <string>
#include <vector>

#include "eagerlog/ir.hpp"

namespace eagerlog {

struct Diagnostic {
    RuleId rule = 0;
    std::string message;
    SourceSpan span;
};

/// Arity and left-to-right safety checks. A variable becomes bound when it
/// appears directly as an argument of a positive atom, or as the lhs of an Eq
/// whose rhs is already ground. Heads, negations, disequalities and functor
/// arguments may only mention bound variables. Empty result == valid program.
std::vector<Diagnostic> validate(const Program& p, const std::map<std::string, std::size_t>& functor_arities);

} // namespace eagerlog

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eagerlog/ir.hpp"

namespace eagerlog {

using Tuple = std::vector<ValueId>;

/// Parses the `.dl` dialect:
///
///     .decl edge(2) input
///     .decl reach(2) output
///     reach(X, Y) :- edge(X, Y).             // comment
///     reach(X, Z) :- edge(X, Y), reach(Y, Z), !blocked(X), X != Z.
///     next(Y) :- cur(X), Y = @add(X, 1).
///
/// Variables start with an upper-case letter or '_', predicates with a
/// lower-case letter, integer literals may be negative. Throws ParseError.
Program parse_program(std::string_view text, Interner& interner, const std::string& file = "<input>");

/// Reads tab-separated decimal integer rows for a relation of `arity`
/// columns. Blank lines are skipped. Throws ParseError naming the 1-based
/// line on an arity mismatch or a non-integer field.
std::vector<Tuple> parse_facts(const std::string& pred, std::size_t arity, std::string_view rows, Interner& interner,
                               const std::string& file = {});

} // namespace eagerlog

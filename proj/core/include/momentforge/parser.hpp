#pragma once

#include <string>

#include "momentforge/ast.hpp"

namespace momentforge {

// Parse and validate a probabilistic loop program.
//
// Syntax summary:
//   <init statements>
//   while <cond or true>:
//     <statements>
//   end
//
// Statements are separated by newlines or ';'. Assignments may be
// simultaneous (x, y = e1, e2). Right-hand sides are categorical choices
// "e1 {p1} e2 {p2} ..." (last probability may be omitted) or distribution
// calls Bernoulli/Normal/Uniform/Laplace/Exponential. Lines starting with '#'
// are comments. Exponents use '**' with a literal non-negative integer.
//
// Throws SyntaxError (with line/column) for malformed input, Error with
// ProbabilityError for invalid categorical probabilities, ValidationError
// for structural violations.
Program parse_program(const std::string& source);

// Parse a goal of the form "E(x^k)" or "E(x)"; returns (variable, k).
std::pair<std::string, unsigned> parse_goal(const std::string& text);

}  // namespace momentforge

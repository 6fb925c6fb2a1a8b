#pragma once

#include <optional>
#include <set>

#include "momentforge/ast.hpp"
#include "momentforge/varpoly.hpp"

namespace momentforge {

// True when the expression references no program variables (symbols allowed).
bool expr_is_const(const ExprPtr& e, const std::set<std::string>& variables);

// Numeric value of an expression with no identifiers at all.
std::optional<Rational> expr_numeric_value(const ExprPtr& e);

// Constant expression -> field element. Fails when a program variable occurs.
Scalar expr_to_scalar(const ExprPtr& e, const std::set<std::string>& variables);

// Polynomial expression -> VarPoly. Identifiers in `variables` become
// polynomial variables, everything else a symbolic constant. Division is
// accepted only by constant expressions.
VarPoly expr_to_varpoly(const ExprPtr& e, const std::set<std::string>& variables);

// Effective probability of each categorical option, the omitted last one
// resolved to 1 - sum of the others.
std::vector<Scalar> categorical_probs(const Categorical& cat,
                                      const std::set<std::string>& variables);

}  // namespace momentforge

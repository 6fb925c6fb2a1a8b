#pragma once

#include <string>

#include "momentforge/ast.hpp"

namespace momentforge {

std::string expr_to_string(const ExprPtr& e);
std::string bool_to_string(const BoolPtr& b);
std::string rhs_to_string(const Rhs& rhs);

// Concrete syntax that reparses to a structurally equal program.
std::string pretty_print(const Program& p);

// Extended concrete syntax with "[guard] default" clauses.
std::string pretty_print(const NormalizedProgram& p);

}  // namespace momentforge

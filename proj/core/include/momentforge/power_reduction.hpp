#pragma once

#include <vector>

#include "momentforge/ast.hpp"
#include "momentforge/finiteness.hpp"
#include "momentforge/varpoly.hpp"

namespace momentforge {

// Vandermonde matrix M with M[i][j] = a_j^i over a finite support, and its
// exact inverse from elementary symmetric polynomials.
struct ReductionTable {
  std::vector<Scalar> support;
  std::vector<std::vector<Scalar>> matrix;   // m x m, row i = powers i
  std::vector<std::vector<Scalar>> inverse;  // exact

  static ReductionTable build(const std::vector<Scalar>& support);
};

// Coefficients c_0..c_{m-1} with X^k = sum c_i X^i on the support.
std::vector<Scalar> reduce_power(const std::vector<Scalar>& support, unsigned k);

// Inverse of the support's power matrix by the explicit elementary-symmetric-
// polynomial formula (no generic elimination).
std::vector<std::vector<Scalar>> inverse_via_symmetric_polys(const std::vector<Scalar>& support);

// Rewrites every finite variable's power >= |support| down to degree
// < |support|, eagerly keeping the monomial universe bounded.
VarPoly reduce_finite_powers(const VarPoly& poly, const TypeEnv& types);

// Polynomial over the (finite) condition variables that is 1 exactly on
// satisfying assignments and 0 elsewhere. Built from the basis products
// [x=c] = prod (x-d)/(c-d), negation 1-[C], conjunction [C1][C2], disjunction
// via De Morgan; inequalities expand over the joint support.
VarPoly indicator_poly(const BoolPtr& cond, const TypeEnv& types,
                       const std::set<std::string>& variables);

}  // namespace momentforge

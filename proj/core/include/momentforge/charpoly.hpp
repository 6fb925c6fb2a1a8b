#pragma once

#include <vector>

#include "momentforge/rational.hpp"
#include "momentforge/surd.hpp"

namespace momentforge {

// Dense univariate polynomial over Q, coeff[i] is the coefficient of x^i.
using RatPoly = std::vector<Rational>;

// det(xI - A), computed exactly via Hessenberg reduction (O(n^3) pivoting,
// O(n^2) polynomial recurrence).
RatPoly char_poly(const std::vector<std::vector<Rational>>& a);

struct CharRoots {
  struct Root {
    Surd value;
    unsigned multiplicity;
  };
  std::vector<Root> roots;        // nonzero real roots in the supported field
  unsigned zero_multiplicity = 0;
  // Non-empty when part of the spectrum is outside the supported field
  // (complex pairs, nested radicals, irreducible factors of degree >= 3).
  // Such modes may still be absent from the solution; the solver's symbolic
  // verification decides.
  std::string unresolved;
};

// Factorization into rational roots and quadratic-surd root pairs (via
// even-polynomial substitution or the quadratic formula); whatever cannot be
// expressed in the field is reported in `unresolved` rather than thrown.
CharRoots factor_char_poly(const RatPoly& p);

}  // namespace momentforge

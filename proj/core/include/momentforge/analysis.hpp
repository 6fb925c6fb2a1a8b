#pragma once

#include <optional>
#include <vector>

#include "momentforge/exppoly.hpp"
#include "momentforge/scalar.hpp"

namespace momentforge {

// Raw moments of one variable: entry k is E(X^k); entry 0 is identically 1.
struct MomentVector {
  std::string variable;
  std::vector<ExpPoly> raw;  // size K+1

  unsigned max_order() const { return raw.empty() ? 0 : static_cast<unsigned>(raw.size() - 1); }
};

// Central moments E((X - E X)^k) for k = 0..K via the binomial transformation.
std::vector<ExpPoly> central_moments(const MomentVector& raw);

// Markov bound: P(X >= t) <= E(X^k)/t^k (X non-negative, t > 0).
ExpPoly markov_bound(const MomentVector& m, const Scalar& t, unsigned k);

// Ratio of exponential polynomials, with an optional single-ExpPoly
// simplification when the denominator divides exactly.
struct ExpPolyRatio {
  ExpPoly num;
  ExpPoly den;
  std::optional<ExpPoly> simplified;

  Surd eval(std::uint64_t n) const;
};

// Paley-Zygmund bound: P(X > t) >= (E X - t)^2 / (E X^2 - 2 t E X + t^2)
// for X >= t almost surely.
ExpPolyRatio paley_zygmund(const ExpPoly& m1, const ExpPoly& m2, const Scalar& t);

// Probability mass over a finite support recovered from moments 0..m-1.
struct RecoveredDistribution {
  std::vector<Scalar> support;
  std::vector<ExpPoly> probabilities;
};

RecoveredDistribution recover_distribution(const std::vector<Scalar>& support,
                                           const std::vector<ExpPoly>& moments);

// lim n->inf num(n)/den(n) by dominant-magnitude comparison (exact |base|
// tests, squaring for surds). Throws LimitDoesNotExist for oscillating or
// unbounded ratios and IndeterminateWithSymbolicBases when base magnitudes
// cannot be compared symbolically.
Surd limit_of_ratio(const ExpPoly& num, const ExpPoly& den);

// Gram-Charlier A series coefficients c_0..c_order from raw numeric moments
// (moments[j] = E(X^j), j = 0..order). Standardizes to zero mean and unit
// variance first.
std::vector<double> gram_charlier_coefficients(const std::vector<double>& moments,
                                               unsigned order);

// Density approximation value at z (standardized coordinates are handled
// internally; x is in the original scale).
double gram_charlier_density(const std::vector<double>& coefficients, double mean,
                             double stddev, double x);

}  // namespace momentforge

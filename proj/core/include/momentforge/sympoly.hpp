#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "momentforge/rational.hpp"

namespace momentforge {

// Power product of symbolic constants, e.g. {p:2, q:1} for p^2*q.
// The map ordering doubles as the deterministic monomial order.
using SymMonomial = std::map<std::string, unsigned>;

// Multivariate polynomial in the symbolic constants with exact rational
// coefficients; no zero coefficients are stored.
class SymPoly {
 public:
  SymPoly() = default;
  explicit SymPoly(const Rational& c);
  static SymPoly constant(const Rational& c);
  static SymPoly symbol(const std::string& name);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  // Only valid when is_constant().
  Rational constant_value() const;

  const std::map<SymMonomial, Rational>& terms() const { return terms_; }

  SymPoly operator-() const;
  SymPoly operator+(const SymPoly& o) const;
  SymPoly operator-(const SymPoly& o) const;
  SymPoly operator*(const SymPoly& o) const;
  SymPoly scaled(const Rational& c) const;
  SymPoly pow(unsigned e) const;

  bool operator==(const SymPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const SymPoly& o) const { return terms_ != o.terms_; }
  // Total order for canonical sorting.
  bool operator<(const SymPoly& o) const { return terms_ < o.terms_; }

  void collect_symbols(std::set<std::string>& out) const;
  std::set<std::string> symbols() const;

  // Coefficient of the lexicographically largest monomial; 0 for the zero poly.
  Rational leading_coefficient() const;
  SymMonomial leading_monomial() const;

  // Largest power of `sym` occurring in any term.
  unsigned degree_in(const std::string& sym) const;
  unsigned total_degree() const;

  Rational evaluate(const std::map<std::string, Rational>& bindings) const;
  // Partial substitution: symbols present in `bindings` are replaced, others kept.
  SymPoly substitute(const std::map<std::string, Rational>& bindings) const;

  std::string to_string() const;

  void add_term(const SymMonomial& m, const Rational& c);

 private:
  std::map<SymMonomial, Rational> terms_;
};

// Exact quotient; fails (Internal) if b does not divide a.
SymPoly sympoly_div_exact(const SymPoly& a, const SymPoly& b);

// GCD in Q[symbols], normalized monic w.r.t. the monomial order.
// Nonzero constants are units: gcd with a constant is 1.
SymPoly sympoly_gcd(const SymPoly& a, const SymPoly& b);

}  // namespace momentforge

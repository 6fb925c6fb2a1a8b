#pragma once

#include <map>
#include <set>
#include <string>

#include "momentforge/scalar.hpp"

namespace momentforge {

// Power product of program variables; the empty map is the monomial 1.
using Monomial = std::map<std::string, unsigned>;

unsigned monomial_total_degree(const Monomial& m);
std::string monomial_to_string(const Monomial& m);

// Multivariate polynomial in program variables over the constant field.
class VarPoly {
 public:
  VarPoly() = default;
  explicit VarPoly(const Scalar& c);
  static VarPoly constant(const Scalar& c);
  static VarPoly variable(const std::string& name);
  static VarPoly monomial(const Monomial& m, const Scalar& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_value() const;

  const std::map<Monomial, Scalar>& terms() const { return terms_; }

  VarPoly operator-() const;
  VarPoly operator+(const VarPoly& o) const;
  VarPoly operator-(const VarPoly& o) const;
  VarPoly operator*(const VarPoly& o) const;
  VarPoly scaled(const Scalar& c) const;
  VarPoly pow(unsigned e) const;

  bool operator==(const VarPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const VarPoly& o) const { return terms_ != o.terms_; }

  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  unsigned degree_in(const std::string& var) const;
  Scalar coefficient(const Monomial& m) const;

  // Replace every occurrence of `var` by `replacement`, fully expanded.
  VarPoly substitute(const std::string& var, const VarPoly& replacement) const;

  Scalar evaluate(const std::map<std::string, Scalar>& assignment) const;

  void add_term(const Monomial& m, const Scalar& c);

  std::string to_string() const;

 private:
  std::map<Monomial, Scalar> terms_;
};

}  // namespace momentforge

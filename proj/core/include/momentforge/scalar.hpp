#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "momentforge/sympoly.hpp"

namespace momentforge {

// Element of the constant field Q(symbolic constants): a gcd-reduced ratio of
// polynomials with the denominator monic under the monomial order. Canonical,
// so equality is plain structural comparison.
class Scalar {
 public:
  Scalar() : num_(), den_(SymPoly::constant(Rational(1))) {}
  Scalar(const Rational& r) : num_(r), den_(SymPoly::constant(Rational(1))) {}
  Scalar(long n) : Scalar(Rational(n)) {}
  static Scalar from_rational(const Rational& r) { return Scalar(r); }
  static Scalar symbol(const std::string& name);
  static Scalar ratio(SymPoly num, SymPoly den);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  // True when the value is a plain rational (no symbolic constants).
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  Rational as_rational() const;

  const SymPoly& num() const { return num_; }
  const SymPoly& den() const { return den_; }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  Scalar inverse() const;
  Scalar pow(unsigned e) const;

  bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Deterministic total order for sorting; not a numeric comparison.
  bool operator<(const Scalar& o) const;

  std::set<std::string> symbols() const;
  bool has_symbols() const { return !is_rational(); }

  Rational evaluate(const std::map<std::string, Rational>& bindings) const;
  Scalar substitute(const std::map<std::string, Rational>& bindings) const;

  std::string to_string() const;

 private:
  void normalize();

  SymPoly num_;
  SymPoly den_;
};

inline Scalar operator*(const Rational& r, const Scalar& s) { return Scalar(r) * s; }

}  // namespace momentforge

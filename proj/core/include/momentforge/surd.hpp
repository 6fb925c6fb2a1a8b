#pragma once

#include <cstdint>
#include <string>

#include "momentforge/scalar.hpp"

namespace momentforge {

// Value a + b*sqrt(d) with a, b in the constant field and d a positive
// square-free integer. b == 0 forces d == 1, so plain field elements embed
// canonically and equality stays structural.
class Surd {
 public:
  Surd() : a_(Rational(0)), b_(Rational(0)), d_(1) {}
  Surd(const Scalar& plain) : a_(plain), b_(Rational(0)), d_(1) {}
  Surd(const Rational& r) : Surd(Scalar(r)) {}
  Surd(long n) : Surd(Scalar(n)) {}
  Surd(Scalar a, Scalar b, std::uint64_t d);

  // sqrt(r) for a non-negative rational, as coeff*sqrt(d).
  static Surd sqrt_of(const Rational& r);

  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }
  std::uint64_t d() const { return d_; }

  bool is_plain() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  const Scalar& plain() const;
  bool has_symbols() const { return a_.has_symbols() || b_.has_symbols(); }

  Surd operator-() const;
  Surd operator+(const Surd& o) const;
  Surd operator-(const Surd& o) const;
  Surd operator*(const Surd& o) const;
  Surd operator/(const Surd& o) const;
  Surd& operator+=(const Surd& o) { return *this = *this + o; }
  Surd& operator-=(const Surd& o) { return *this = *this - o; }
  Surd& operator*=(const Surd& o) { return *this = *this * o; }
  Surd inverse() const;
  Surd pow(unsigned long e) const;
  Surd conjugate() const;

  bool operator==(const Surd& o) const { return d_ == o.d_ && a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const Surd& o) const { return !(*this == o); }
  // Deterministic order for canonical sorting (not numeric).
  bool operator<(const Surd& o) const;

  // Exact numeric sign (-1, 0, +1); requires rational a and b.
  int sign() const;
  // Exact numeric comparison with another surd (may have a different d);
  // requires rational components on both sides.
  int compare_value(const Surd& o) const;

  // |this| as a surd (rational components required).
  Surd abs_value() const;

  double to_double(const std::map<std::string, Rational>& bindings = {}) const;
  std::string to_string() const;
  // Decimal rendering with the given precision (digits after the point).
  std::string to_decimal(unsigned digits, const std::map<std::string, Rational>& bindings = {}) const;

 private:
  Scalar a_, b_;
  std::uint64_t d_;
};

// Largest square-free part: factor n = s^2 * d and return {d, s}.
std::pair<std::uint64_t, std::uint64_t> squarefree_part(std::uint64_t n);

// Exact sign of r0 + r1*sqrt(d1) + r2*sqrt(d2), pure rationals.
int sign_of_two_surd_sum(const Rational& r0, const Rational& r1, std::uint64_t d1,
                         const Rational& r2, std::uint64_t d2);

}  // namespace momentforge

#include "momentforge/scalar.hpp"

#include "momentforge/errors.hpp"

namespace momentforge {

Scalar Scalar::symbol(const std::string& name) {
  Scalar s;
  s.num_ = SymPoly::symbol(name);
  s.den_ = SymPoly::constant(Rational(1));
  return s;
}

Scalar Scalar::ratio(SymPoly num, SymPoly den) {
  if (den.is_zero()) fail(ErrorCode::ZeroDenominator, "zero denominator in constant expression");
  Scalar s;
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  s.normalize();
  return s;
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = SymPoly::constant(Rational(1));
    return;
  }
  if (!den_.is_constant() || !num_.is_constant()) {
    SymPoly g = sympoly_gcd(num_, den_);
    if (!g.is_one() && !g.is_zero()) {
      num_ = sympoly_div_exact(num_, g);
      den_ = sympoly_div_exact(den_, g);
    }
  }
  // Monic denominator fixes the representative (leading coefficient +1).
  Rational lc = den_.leading_coefficient();
  if (lc != 1) {
    Rational inv = Rational(1) / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

Rational Scalar::as_rational() const {
  if (!is_rational()) {
    fail(ErrorCode::ValidationError, "value is symbolic, not a plain rational: " + to_string());
  }
  return num_.constant_value() / den_.constant_value();
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.num_ = -s.num_;
  return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar s;
  if (den_ == o.den_) {
    s.num_ = num_ + o.num_;
    s.den_ = den_;
  } else {
    s.num_ = num_ * o.den_ + o.num_ * den_;
    s.den_ = den_ * o.den_;
  }
  s.normalize();
  return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar s;
  s.num_ = num_ * o.num_;
  s.den_ = den_ * o.den_;
  s.normalize();
  return s;
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(ErrorCode::ZeroDenominator, "inverse of zero");
  Scalar s;
  s.num_ = den_;
  s.den_ = num_;
  s.normalize();
  return s;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::pow(unsigned e) const {
  Scalar r(Rational(1));
  Scalar base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

bool Scalar::operator<(const Scalar& o) const {
  if (num_ != o.num_) return num_ < o.num_;
  return den_ < o.den_;
}

std::set<std::string> Scalar::symbols() const {
  std::set<std::string> s = num_.symbols();
  den_.collect_symbols(s);
  return s;
}

Rational Scalar::evaluate(const std::map<std::string, Rational>& bindings) const {
  Rational d = den_.evaluate(bindings);
  if (d == 0) fail(ErrorCode::ZeroDenominator, "denominator vanishes under bindings");
  return num_.evaluate(bindings) / d;
}

Scalar Scalar::substitute(const std::map<std::string, Rational>& bindings) const {
  return Scalar::ratio(num_.substitute(bindings), den_.substitute(bindings));
}

std::string Scalar::to_string() const {
  if (is_rational()) return rational_to_string(as_rational());
  std::string n = num_.to_string();
  if (den_.is_one()) {
    if (num_.terms().size() > 1) return "(" + n + ")";
    return n;
  }
  std::string d = den_.to_string();
  return "(" + n + ")/(" + d + ")";
}

}  // namespace momentforge

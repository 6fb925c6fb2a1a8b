#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace momentforge {

// Exact arbitrary-precision rational. GMP keeps values canonical
// (reduced fraction, positive denominator) after every operation.
using Rational = mpq_class;

inline Rational rat(long n) { return Rational(n); }
inline Rational rat(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Accepts "p", "p/q" and decimal literals like "0.25" or "-1.5e-3".
Rational rational_from_string(const std::string& text);

// nullopt when the text is not a valid rational literal.
std::optional<Rational> try_rational_from_string(const std::string& text);

bool rational_is_integer(const Rational& r);

Rational rational_pow(const Rational& base, unsigned long exp);

Rational rational_factorial(unsigned long n);

// (n-1)!! for odd-step products; n must be odd or zero handling is the caller's.
Rational rational_double_factorial(unsigned long n);

Rational rational_binomial(unsigned long n, unsigned long k);

// "p/q" (or "p" when q == 1); the exact serialization format.
std::string rational_to_string(const Rational& r);

// Decimal rendering with the requested number of significant digits.
std::string rational_to_decimal(const Rational& r, unsigned digits);

double rational_to_double(const Rational& r);

std::size_t rational_hash(const Rational& r);

}  // namespace momentforge

#include "momentforge/rational.hpp"

#include <cctype>
#include <sstream>

#include "momentforge/errors.hpp"

namespace momentforge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "syntax_error";
    case ErrorCode::ProbabilityError: return "probability_error";
    case ErrorCode::ValidationError: return "validation_error";
    case ErrorCode::NotApplicable: return "not_applicable";
    case ErrorCode::AssumptionUnverified: return "assumption_unverified";
    case ErrorCode::NonFiniteCondition: return "non_finite_condition";
    case ErrorCode::IncomparableSupport: return "incomparable_support";
    case ErrorCode::DegenerateSupport: return "degenerate_support";
    case ErrorCode::UnsupportedDistribution: return "unsupported_distribution";
    case ErrorCode::UnsupportedAlgebraicDegree: return "unsupported_algebraic_degree";
    case ErrorCode::SymbolicCharPoly: return "symbolic_char_poly";
    case ErrorCode::OrderingViolation: return "ordering_violation";
    case ErrorCode::StateExplosion: return "state_explosion";
    case ErrorCode::ContinuousDistribution: return "continuous_distribution";
    case ErrorCode::LimitDoesNotExist: return "limit_does_not_exist";
    case ErrorCode::IndeterminateWithSymbolicBases: return "indeterminate_with_symbolic_bases";
    case ErrorCode::ZeroDenominator: return "zero_denominator";
    case ErrorCode::DegenerateVariance: return "degenerate_variance";
    case ErrorCode::NonPositiveThreshold: return "non_positive_threshold";
    case ErrorCode::UsageError: return "usage_error";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

std::optional<Rational> try_rational_from_string(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    auto num = try_rational_from_string(text.substr(0, slash));
    auto den = try_rational_from_string(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    Rational r = *num / *den;
    r.canonicalize();
    return r;
  }

  // Decimal / integer literal, optional exponent.
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      break;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  long exp10 = 0;
  if (i < text.size()) {
    // exponent part
    ++i;  // skip 'e'
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) return std::nullopt;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      exp10 = exp10 * 10 + (text[i] - '0');
      if (exp10 > 100000) return std::nullopt;
    }
    if (eneg) exp10 = -exp10;
  }

  mpz_class mantissa(digits, 10);
  if (neg) mantissa = -mantissa;
  long net = exp10 - frac_digits;
  Rational r(mantissa);
  if (net > 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net));
    r *= Rational(scale);
  } else if (net < 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-net));
    r /= Rational(scale);
  }
  r.canonicalize();
  return r;
}

Rational rational_from_string(const std::string& text) {
  auto r = try_rational_from_string(text);
  if (!r) fail(ErrorCode::ValidationError, "not a rational literal: '" + text + "'");
  return *r;
}

bool rational_is_integer(const Rational& r) { return r.get_den() == 1; }

Rational rational_pow(const Rational& base, unsigned long exp) {
  // 0^0 := 1 throughout.
  if (exp == 0) return Rational(1);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exp);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational rational_factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational rational_double_factorial(unsigned long n) {
  mpz_class f;
  mpz_2fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational rational_binomial(unsigned long n, unsigned long k) {
  if (k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string rational_to_decimal(const Rational& r, unsigned digits) {
  if (r == 0) return "0";
  mpz_class num = r.get_num();
  mpz_class den = r.get_den();
  bool neg = num < 0;
  if (neg) num = -num;

  mpz_class integral = num / den;
  mpz_class remainder = num % den;
  std::string out = (neg ? "-" : "") + integral.get_str();
  if (remainder == 0) return out;

  out.push_back('.');
  for (unsigned i = 0; i < digits && remainder != 0; ++i) {
    remainder *= 10;
    mpz_class digit = remainder / den;
    remainder %= den;
    out.push_back(static_cast<char>('0' + digit.get_si()));
  }
  if (remainder != 0) out += "...";
  return out;
}

double rational_to_double(const Rational& r) { return r.get_d(); }

std::size_t rational_hash(const Rational& r) {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](const mpz_class& z) {
    for (char c : z.get_str(16)) {
      h ^= static_cast<std::size_t>(c);
      h *= 1099511628211ull;
    }
    h ^= 0x9e3779b97f4a7c15ull;
  };
  mix(r.get_num());
  mix(r.get_den());
  return h;
}

}  // namespace momentforge

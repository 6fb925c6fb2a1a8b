#include "momentforge/surd.hpp"

#include <cmath>
#include <sstream>

#include "momentforge/errors.hpp"

namespace momentforge {

std::pair<std::uint64_t, std::uint64_t> squarefree_part(std::uint64_t n) {
  if (n == 0) return {0, 1};
  std::uint64_t d = 1, s = 1;
  for (std::uint64_t p = 2; p * p <= n && p < 1000000; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (unsigned i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2 == 1) d *= p;
  }
  if (n > 1) {
    // Residual co-factor: either a perfect square or treated as square-free.
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    for (std::uint64_t c = (r > 2 ? r - 2 : 0); c <= r + 2; ++c) {
      if (c * c == n) {
        s *= c;
        n = 1;
        break;
      }
    }
    d *= n;
  }
  return {d, s};
}

Surd::Surd(Scalar a, Scalar b, std::uint64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (d_ == 0) fail(ErrorCode::Internal, "surd with d=0");
  if (b_.is_zero()) {
    d_ = 1;
    return;
  }
  auto [sf, sq] = squarefree_part(d_);
  if (sq != 1) {
    b_ = b_ * Scalar(Rational(static_cast<long>(sq)));
    d_ = sf;
  }
  if (d_ == 1) {
    a_ = a_ + b_;
    b_ = Scalar(Rational(0));
  }
}

Surd Surd::sqrt_of(const Rational& r) {
  if (r < 0) {
    fail(ErrorCode::UnsupportedAlgebraicDegree, "square root of a negative rational is complex");
  }
  if (r == 0) return Surd(Scalar(Rational(0)));
  // sqrt(p/q) = sqrt(p*q)/q
  mpz_class pq = r.get_num() * r.get_den();
  if (!pq.fits_ulong_p()) {
    fail(ErrorCode::UnsupportedAlgebraicDegree,
         "radicand too large for exact square-free factorization");
  }
  auto [d, s] = squarefree_part(pq.get_ui());
  Rational coeff(static_cast<long>(s));
  coeff /= Rational(r.get_den());
  if (d == 1) return Surd(Scalar(coeff));
  return Surd(Scalar(Rational(0)), Scalar(coeff), d);
}

const Scalar& Surd::plain() const {
  if (!is_plain()) {
    fail(ErrorCode::UnsupportedAlgebraicDegree, "value is irrational: " + to_string());
  }
  return a_;
}

Surd Surd::operator-() const {
  Surd s = *this;
  s.a_ = -s.a_;
  s.b_ = -s.b_;
  return s;
}

Surd Surd::operator+(const Surd& o) const {
  if (is_plain()) return Surd(a_ + o.a_, o.b_, o.d_);
  if (o.is_plain()) return Surd(a_ + o.a_, b_, d_);
  if (d_ != o.d_) {
    fail(ErrorCode::UnsupportedAlgebraicDegree,
         "mixing sqrt(" + std::to_string(d_) + ") and sqrt(" + std::to_string(o.d_) +
             ") in one value");
  }
  return Surd(a_ + o.a_, b_ + o.b_, d_);
}

Surd Surd::operator-(const Surd& o) const { return *this + (-o); }

Surd Surd::operator*(const Surd& o) const {
  if (is_plain()) return Surd(a_ * o.a_, a_ * o.b_, o.d_);
  if (o.is_plain()) return Surd(a_ * o.a_, b_ * o.a_, d_);
  if (d_ != o.d_) {
    fail(ErrorCode::UnsupportedAlgebraicDegree,
         "mixing sqrt(" + std::to_string(d_) + ") and sqrt(" + std::to_string(o.d_) +
             ") in one value");
  }
  Scalar dd = Scalar(Rational(static_cast<long>(d_)));
  return Surd(a_ * o.a_ + b_ * o.b_ * dd, a_ * o.b_ + b_ * o.a_, d_);
}

Surd Surd::conjugate() const { return Surd(a_, -b_, d_); }

Surd Surd::inverse() const {
  if (is_zero()) fail(ErrorCode::ZeroDenominator, "inverse of zero");
  if (is_plain()) return Surd(a_.inverse());
  // 1/(a+b*sqrt(d)) = (a-b*sqrt(d)) / (a^2 - b^2 d)
  Scalar dd = Scalar(Rational(static_cast<long>(d_)));
  Scalar norm = a_ * a_ - b_ * b_ * dd;
  if (norm.is_zero()) {
    // a = +-b*sqrt(d) with rational a,b is impossible for d > 1 unless both 0,
    // but symbolic components can cancel.
    fail(ErrorCode::ZeroDenominator, "surd norm vanishes");
  }
  Scalar inv = norm.inverse();
  return Surd(a_ * inv, -b_ * inv, d_);
}

Surd Surd::operator/(const Surd& o) const { return *this * o.inverse(); }

Surd Surd::pow(unsigned long e) const {
  Surd r(Scalar(Rational(1)));
  Surd base = *this;
  while (e > 0) {
    if (e & 1ul) r = r * base;
    base = base * base;
    e >>= 1ul;
  }
  return r;
}

bool Surd::operator<(const Surd& o) const {
  if (d_ != o.d_) return d_ < o.d_;
  if (a_ != o.a_) return a_ < o.a_;
  return b_ < o.b_;
}

namespace {

// Exact sign of A + B*sqrt(D) for rationals A, B and square-free D >= 1.
int sign_single(const Rational& a, const Rational& b, std::uint64_t d) {
  int sa = sgn(a);
  Rational bd = b * b * Rational(static_cast<long>(d));
  int sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: |a| vs |b|sqrt(d)  <=>  a^2 vs b^2 d.
  Rational a2 = a * a;
  if (a2 == bd) return 0;
  return (a2 > bd) ? sa : sb;
}

}  // namespace

int sign_of_two_surd_sum(const Rational& r0, const Rational& r1, std::uint64_t d1,
                         const Rational& r2, std::uint64_t d2) {
  if (d1 == d2) return sign_single(r0, r1 + r2, d1);
  if (r1 == 0) return sign_single(r0, r2, d2);
  if (r2 == 0) return sign_single(r0, r1, d1);
  // S := r1*sqrt(d1) + r2*sqrt(d2); x := r0 + S.
  int s1 = sgn(r1), s2 = sgn(r2);
  int sS;
  if (s1 == s2) {
    sS = s1;
  } else {
    Rational lhs = r1 * r1 * Rational(static_cast<long>(d1));
    Rational rhs = r2 * r2 * Rational(static_cast<long>(d2));
    if (lhs == rhs) {
      sS = 0;  // only possible if d1*d2 square; defensive
    } else {
      sS = (lhs > rhs) ? s1 : s2;
    }
  }
  int s0 = sgn(r0);
  if (s0 == 0) return sS;
  if (sS == 0) return s0;
  if (s0 == sS) return s0;
  // |r0| vs |S|: r0^2 vs S^2 = r1^2 d1 + r2^2 d2 + 2 r1 r2 sqrt(d1 d2).
  auto [dd, sq] = squarefree_part(d1 * d2);
  Rational lin = Rational(2) * r1 * r2 * Rational(static_cast<long>(sq));
  Rational constant = r1 * r1 * Rational(static_cast<long>(d1)) +
                      r2 * r2 * Rational(static_cast<long>(d2)) - r0 * r0;
  // sign of (S^2 - r0^2) = constant + lin*sqrt(dd)
  int diff = sign_single(constant, lin, dd);
  if (diff == 0) return 0;
  return (diff > 0) ? sS : s0;
}

int Surd::sign() const {
  if (has_symbols()) {
    fail(ErrorCode::IndeterminateWithSymbolicBases,
         "sign of a value with symbolic constants is undecidable: " + to_string());
  }
  return sign_single(a_.as_rational(), b_.as_rational(), d_);
}

int Surd::compare_value(const Surd& o) const {
  if (has_symbols() || o.has_symbols()) {
    fail(ErrorCode::IndeterminateWithSymbolicBases,
         "comparison of values with symbolic constants is undecidable");
  }
  return sign_of_two_surd_sum(a_.as_rational() - o.a_.as_rational(), b_.as_rational(), d_,
                              -o.b_.as_rational(), o.d_);
}

Surd Surd::abs_value() const { return sign() >= 0 ? *this : -*this; }

double Surd::to_double(const std::map<std::string, Rational>& bindings) const {
  double av = rational_to_double(a_.evaluate(bindings));
  if (b_.is_zero()) return av;
  double bv = rational_to_double(b_.evaluate(bindings));
  return av + bv * std::sqrt(static_cast<double>(d_));
}

std::string Surd::to_string() const {
  if (is_plain()) return a_.to_string();
  std::ostringstream os;
  bool have_a = !a_.is_zero();
  if (have_a) os << a_.to_string();
  std::string bs = b_.to_string();
  if (bs == "1") {
    os << (have_a ? " + " : "") << "sqrt(" << d_ << ")";
  } else if (bs == "-1") {
    os << (have_a ? " - " : "-") << "sqrt(" << d_ << ")";
  } else if (!bs.empty() && bs[0] == '-' && have_a) {
    os << " - " << bs.substr(1) << "*sqrt(" << d_ << ")";
  } else {
    os << (have_a ? " + " : "") << bs << "*sqrt(" << d_ << ")";
  }
  return os.str();
}

std::string Surd::to_decimal(unsigned digits, const std::map<std::string, Rational>& bindings) const {
  Rational ra = a_.evaluate(bindings);
  if (b_.is_zero()) return rational_to_decimal(ra, digits);
  Rational rb = b_.evaluate(bindings);
  // High-precision sqrt via GMP floats.
  unsigned long prec_bits = static_cast<unsigned long>((digits + 10) * 3.33) + 16;
  mpf_class root(0, prec_bits);
  mpf_class dd(static_cast<unsigned long>(d_), prec_bits);
  mpf_sqrt(root.get_mpf_t(), dd.get_mpf_t());
  mpf_class total = mpf_class(ra, prec_bits) + mpf_class(rb, prec_bits) * root;
  mp_exp_t exp10 = 0;
  std::string mant = total.get_str(exp10, 10, digits);
  if (mant.empty() || mant == "-") return "0";
  bool neg = mant[0] == '-';
  if (neg) mant = mant.substr(1);
  std::string out;
  if (exp10 <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + mant;
  } else if (static_cast<std::size_t>(exp10) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp10) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp10)) + "." +
          mant.substr(static_cast<std::size_t>(exp10));
  }
  return (neg ? "-" : "") + out;
}

}  // namespace momentforge

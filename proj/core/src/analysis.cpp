#include "momentforge/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "momentforge/errors.hpp"
#include "momentforge/power_reduction.hpp"

namespace momentforge {

std::vector<ExpPoly> central_moments(const MomentVector& m) {
  if (m.raw.empty()) fail(ErrorCode::UsageError, "no raw moments provided");
  const ExpPoly& mean = m.raw.size() > 1 ? m.raw[1] : m.raw[0];
  std::vector<ExpPoly> out;
  out.reserve(m.raw.size());
  for (unsigned k = 0; k < m.raw.size(); ++k) {
    // E((X - b)^k) = sum_i C(k,i) E(X^i) (-b)^(k-i) with b = E(X).
    ExpPoly acc;
    for (unsigned i = 0; i <= k; ++i) {
      ExpPoly term = m.raw[i].scaled(Surd(Scalar(rational_binomial(k, i))));
      ExpPoly neg_mean_pow = (-mean).pow(k - i);
      acc = acc + term * neg_mean_pow;
    }
    out.push_back(acc.simplified());
  }
  return out;
}

ExpPoly markov_bound(const MomentVector& m, const Scalar& t, unsigned k) {
  if (k >= m.raw.size()) {
    fail(ErrorCode::UsageError, "moment order " + std::to_string(k) + " not available");
  }
  if (t.is_rational()) {
    if (t.as_rational() <= 0) {
      fail(ErrorCode::NonPositiveThreshold, "threshold must be positive");
    }
  }
  return m.raw[k].scaled(Surd(t.pow(k).inverse())).simplified();
}

Surd ExpPolyRatio::eval(std::uint64_t n) const {
  Surd d = den.eval(n);
  if (d.is_zero()) fail(ErrorCode::ZeroDenominator, "ratio denominator vanishes at n");
  return num.eval(n) / d;
}

namespace {

// Exact division when the denominator is a single degree-0 term c*u^n.
std::optional<ExpPoly> try_divide(const ExpPoly& num, const ExpPoly& den) {
  if (!den.corrections().empty() || den.terms().size() != 1) return std::nullopt;
  const ExpTerm& d = den.terms()[0];
  if (d.degree() != 0) return std::nullopt;
  Surd c = d.coeff_at(0);
  if (c.is_zero() || d.base.is_zero()) return std::nullopt;
  ExpPoly out;
  Surd cinv = c.inverse();
  Surd binv = d.base.inverse();
  for (const auto& t : num.terms()) {
    ExpTerm nt = t;
    nt.base = t.base * binv;
    for (auto& cc : nt.coeff) cc = cc * cinv;
    out.add_term(nt);
  }
  if (!num.corrections().empty()) {
    for (const auto& [n, v] : num.corrections()) {
      out.add_correction(n, v / (c * d.base.pow(n)));
    }
  }
  return out.simplified();
}

}  // namespace

ExpPolyRatio paley_zygmund(const ExpPoly& m1, const ExpPoly& m2, const Scalar& t) {
  Surd ts{t};
  ExpPoly tpoly = ExpPoly::constant(ts);
  ExpPoly num = (m1 - tpoly).pow(2);
  ExpPoly den = (m2 - m1.scaled(ts * Surd(Scalar(Rational(2)))) + tpoly * tpoly).simplified();
  ExpPolyRatio out{num.simplified(), den, std::nullopt};
  if (auto q = try_divide(out.num, out.den)) out.simplified = *q;
  return out;
}

RecoveredDistribution recover_distribution(const std::vector<Scalar>& support,
                                           const std::vector<ExpPoly>& moments) {
  const std::size_t m = support.size();
  if (moments.size() < m) {
    fail(ErrorCode::UsageError,
         "need moments 0.." + std::to_string(m - 1) + " to recover " + std::to_string(m) +
             " probabilities");
  }
  // sum_i p_i a_i^j = E(X^j): with M[j][i] = a_i^j this is M p = mom, so
  // p = M^{-1} mom with the same matrix the power-reduction table inverts.
  auto inv = inverse_via_symmetric_polys(support);
  RecoveredDistribution out;
  out.support = support;
  out.probabilities.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ExpPoly p;
    for (std::size_t j = 0; j < m; ++j) {
      // inv has rows indexed by support element, columns by power: the
      // solution p_i = sum_j inv^T[i][j] mom_j = sum_j inv[i][j] mom_j.
      if (inv[i][j].is_zero()) continue;
      p = p + moments[j].scaled(Surd(inv[i][j]));
    }
    out.probabilities.push_back(p.simplified());
  }
  return out;
}

namespace {

struct DominantInfo {
  bool has_terms = false;
  Surd magnitude;      // squared magnitude of the dominant base, as surd
  unsigned degree = 0; // max coefficient-poly degree within the class
};

Surd squared_magnitude(const Surd& base) { return base * base; }

// Coefficients of n^deg at bases +lambda and -lambda within the dominant
// magnitude class.
struct LeadingPair {
  Surd positive;  // coefficient at the positive dominant base
  Surd negative;  // coefficient at the negative dominant base
};

}  // namespace

Surd limit_of_ratio(const ExpPoly& num_in, const ExpPoly& den_in) {
  ExpPoly num = num_in.simplified();
  ExpPoly den = den_in.simplified();
  if (den.terms().empty()) {
    fail(ErrorCode::ZeroDenominator, "denominator is identically zero in the tail");
  }
  if (num.terms().empty()) return Surd(Scalar(Rational(0)));

  for (const auto* f : {&num, &den}) {
    for (const auto& t : f->terms()) {
      if (t.base.has_symbols()) {
        fail(ErrorCode::IndeterminateWithSymbolicBases,
             "cannot compare magnitudes of symbolic bases: " + t.base.to_string());
      }
      for (const auto& c : t.coeff) {
        if (c.has_symbols()) {
          fail(ErrorCode::IndeterminateWithSymbolicBases,
               "cannot order terms with symbolic coefficients");
        }
      }
    }
  }

  // Dominant squared magnitude across numerator and denominator.
  std::optional<Surd> best;
  auto consider = [&](const ExpPoly& f) {
    for (const auto& t : f.terms()) {
      Surd m2 = squared_magnitude(t.base);
      if (!best || m2.compare_value(*best) > 0) best = m2;
    }
  };
  consider(num);
  consider(den);

  unsigned max_deg = 0;
  auto scan_deg = [&](const ExpPoly& f) {
    for (const auto& t : f.terms()) {
      if (squared_magnitude(t.base).compare_value(*best) == 0) {
        max_deg = std::max(max_deg, t.degree());
      }
    }
  };
  scan_deg(num);
  scan_deg(den);

  auto leading = [&](const ExpPoly& f) {
    LeadingPair lp{Surd(Scalar(Rational(0))), Surd(Scalar(Rational(0)))};
    for (const auto& t : f.terms()) {
      if (squared_magnitude(t.base).compare_value(*best) != 0) continue;
      Surd c = t.coeff_at(max_deg);
      if (c.is_zero()) continue;
      if (t.base.sign() >= 0) {
        lp.positive += c;
      } else {
        lp.negative += c;
      }
    }
    return lp;
  };
  LeadingPair a = leading(num);
  LeadingPair b = leading(den);

  bool den_attains = !b.positive.is_zero() || !b.negative.is_zero();
  if (!den_attains) {
    fail(ErrorCode::LimitDoesNotExist,
         "numerator dominates the denominator (unbounded ratio)");
  }
  if (a.negative.is_zero() && b.negative.is_zero()) {
    return a.positive / b.positive;
  }
  // Oscillating dominant class: accept only when both parities agree.
  Surd den_even = b.positive + b.negative;
  Surd den_odd = b.positive - b.negative;
  if (den_even.is_zero() || den_odd.is_zero()) {
    fail(ErrorCode::LimitDoesNotExist,
         "oscillating denominator in the dominant magnitude class");
  }
  Surd lim_even = (a.positive + a.negative) / den_even;
  Surd lim_odd = (a.positive - a.negative) / den_odd;
  if (!(lim_even == lim_odd)) {
    fail(ErrorCode::LimitDoesNotExist, "ratio oscillates between " + lim_even.to_string() +
                                           " and " + lim_odd.to_string());
  }
  return lim_even;
}

std::vector<double> gram_charlier_coefficients(const std::vector<double>& moments,
                                               unsigned order) {
  if (moments.size() < static_cast<std::size_t>(order) + 1 || moments.size() < 3) {
    fail(ErrorCode::UsageError, "need numeric moments 0..order (order >= 2)");
  }
  double mean = moments[1];
  double variance = moments[2] - mean * mean;
  if (!(variance > 0)) {
    fail(ErrorCode::DegenerateVariance, "variance must be positive");
  }
  double sd = std::sqrt(variance);

  // Standardized moments mu[k] = E(((X-mean)/sd)^k) from raw moments.
  std::vector<double> mu(order + 1, 0.0);
  for (unsigned k = 0; k <= order; ++k) {
    double acc = 0.0;
    double binom = 1.0;
    for (unsigned i = 0; i <= k; ++i) {
      // C(k,i) E(X^i) (-mean)^(k-i)
      acc += binom * moments[i] * std::pow(-mean, static_cast<double>(k - i));
      binom = binom * static_cast<double>(k - i) / static_cast<double>(i + 1);
    }
    mu[k] = acc / std::pow(sd, static_cast<double>(k));
  }

  // Probabilists' Hermite polynomials He_j, coefficient table.
  std::vector<std::vector<double>> he(order + 1);
  he[0] = {1.0};
  if (order >= 1) he[1] = {0.0, 1.0};
  for (unsigned j = 2; j <= order; ++j) {
    std::vector<double> next(j + 1, 0.0);
    for (std::size_t i = 0; i < he[j - 1].size(); ++i) next[i + 1] += he[j - 1][i];
    for (std::size_t i = 0; i < he[j - 2].size(); ++i) {
      next[i] -= static_cast<double>(j - 1) * he[j - 2][i];
    }
    he[j] = std::move(next);
  }

  std::vector<double> coeff(order + 1, 0.0);
  double fact = 1.0;
  for (unsigned j = 0; j <= order; ++j) {
    if (j > 0) fact *= j;
    double c = 0.0;
    for (std::size_t i = 0; i < he[j].size(); ++i) c += he[j][i] * mu[i];
    coeff[j] = c / fact;
  }
  return coeff;
}

double gram_charlier_density(const std::vector<double>& coefficients, double mean,
                             double stddev, double x) {
  double z = (x - mean) / stddev;
  double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  // He_j(z) by recurrence.
  double sum = 0.0;
  double h0 = 1.0, h1 = z;
  for (unsigned j = 0; j < coefficients.size(); ++j) {
    double hj;
    if (j == 0) {
      hj = h0;
    } else if (j == 1) {
      hj = h1;
    } else {
      double next = z * h1 - static_cast<double>(j - 1) * h0;
      h0 = h1;
      h1 = next;
      hj = next;
    }
    sum += coefficients[j] * hj;
  }
  return phi * sum / stddev;
}

}  // namespace momentforge

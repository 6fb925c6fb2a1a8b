#include "momentforge/charpoly.hpp"

#include <algorithm>
#include <map>

#include "momentforge/errors.hpp"

namespace momentforge {

namespace {

int poly_degree(const RatPoly& p) {
  for (std::size_t i = p.size(); i > 0; --i) {
    if (p[i - 1] != 0) return static_cast<int>(i - 1);
  }
  return -1;
}

void poly_trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational poly_eval(const RatPoly& p, const Rational& x) {
  Rational acc(0);
  for (std::size_t i = p.size(); i > 0; --i) {
    acc = acc * x + p[i - 1];
  }
  return acc;
}

// Exact division by (x - r); remainder must vanish.
RatPoly poly_divide_linear(const RatPoly& p, const Rational& r) {
  RatPoly q(p.size() - 1, Rational(0));
  Rational carry(0);
  for (std::size_t i = p.size(); i > 1; --i) {
    carry = p[i - 1] + carry * r;
    q[i - 2] = carry;
  }
  return q;
}

}  // namespace

RatPoly char_poly(const std::vector<std::vector<Rational>>& a_in) {
  const std::size_t n = a_in.size();
  if (n == 0) return RatPoly{Rational(1)};
  std::vector<std::vector<Rational>> h = a_in;

  // Similarity reduction to upper Hessenberg form with exact arithmetic.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t pivot = 0;
    bool found = false;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (h[i][j] != 0) {
        pivot = i;
        found = true;
        break;
      }
    }
    if (!found) continue;
    if (pivot != j + 1) {
      std::swap(h[pivot], h[j + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(h[r][pivot], h[r][j + 1]);
    }
    Rational inv = Rational(1) / h[j + 1][j];
    for (std::size_t i = j + 2; i < n; ++i) {
      if (h[i][j] == 0) continue;
      Rational f = h[i][j] * inv;
      for (std::size_t c = 0; c < n; ++c) h[i][c] -= f * h[j + 1][c];
      for (std::size_t r = 0; r < n; ++r) h[r][j + 1] += f * h[r][i];
    }
  }

  // Leading-principal-minor recurrence for det(xI - H).
  std::vector<RatPoly> p(n + 1);
  p[0] = RatPoly{Rational(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    // (x - h_kk) * p_{k-1}
    RatPoly cur(p[k - 1].size() + 1, Rational(0));
    for (std::size_t i = 0; i < p[k - 1].size(); ++i) {
      cur[i + 1] += p[k - 1][i];
      cur[i] -= h[k - 1][k - 1] * p[k - 1][i];
    }
    Rational subprod(1);
    for (std::size_t i = k - 1; i >= 1; --i) {
      // product of subdiagonal entries h_{j+1,j} for j = i..k-1
      subprod *= h[i][i - 1];
      if (subprod == 0) break;
      Rational factor = h[i - 1][k - 1] * subprod;
      if (factor == 0) continue;
      for (std::size_t c = 0; c < p[i - 1].size(); ++c) {
        cur[c] -= factor * p[i - 1][c];
      }
    }
    p[k] = std::move(cur);
  }
  return p[n];
}

namespace {

// Prime factorization with trial division; an unfactored co-factor is kept
// whole (possibly composite) which only prunes the divisor candidates.
std::map<mpz_class, unsigned> factor_int(mpz_class n) {
  std::map<mpz_class, unsigned> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (unsigned long p = 2; p < 1000000 && mpz_class(p) * p <= n; p == 2 ? p = 3 : p += 2) {
    while (n % p == 0) {
      ++out[mpz_class(p)];
      n /= p;
    }
  }
  if (n > 1) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      out[r] += 2;
    } else {
      ++out[n];
    }
  }
  return out;
}

void enumerate_divisors(const std::map<mpz_class, unsigned>& factors, std::vector<mpz_class>& out,
                        std::size_t cap) {
  out.push_back(1);
  for (const auto& [p, e] : factors) {
    std::size_t base = out.size();
    mpz_class pk(1);
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) {
        out.push_back(out[i] * pk);
        if (out.size() > cap) return;
      }
    }
  }
}

// All rational roots with multiplicities; p is reduced by every root found.
std::vector<std::pair<Rational, unsigned>> extract_rational_roots(RatPoly& p) {
  std::vector<std::pair<Rational, unsigned>> roots;
  poly_trim(p);
  if (poly_degree(p) <= 0) return roots;

  // Clear denominators.
  mpz_class lcm(1);
  for (const auto& c : p) {
    mpz_class den = c.get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    lcm = lcm / g * den;
  }
  std::vector<mpz_class> ip;
  ip.reserve(p.size());
  for (const auto& c : p) {
    Rational scaled = c * Rational(lcm);
    ip.push_back(scaled.get_num());
  }
  // Trailing zero coefficients were stripped by the caller (zero roots).
  mpz_class a0 = ip.front();
  mpz_class an = ip.back();
  if (a0 == 0) fail(ErrorCode::Internal, "zero constant term in root extraction");

  constexpr std::size_t kDivisorCap = 20000;
  std::vector<mpz_class> nums, dens;
  enumerate_divisors(factor_int(a0), nums, kDivisorCap);
  enumerate_divisors(factor_int(an), dens, kDivisorCap);
  std::sort(nums.begin(), nums.end());
  std::sort(dens.begin(), dens.end());

  std::vector<Rational> candidates;
  for (const auto& num : nums) {
    for (const auto& den : dens) {
      Rational r(num, den);
      r.canonicalize();
      candidates.push_back(r);
      candidates.push_back(-r);
      if (candidates.size() > 4 * kDivisorCap) break;
    }
    if (candidates.size() > 4 * kDivisorCap) break;
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (const auto& r : candidates) {
    unsigned mult = 0;
    while (poly_degree(p) >= 1 && poly_eval(p, r) == 0) {
      p = poly_divide_linear(p, r);
      ++mult;
    }
    if (mult > 0) roots.emplace_back(r, mult);
    if (poly_degree(p) <= 0) break;
  }
  return roots;
}

bool is_even_poly(const RatPoly& p) {
  for (std::size_t i = 1; i < p.size(); i += 2) {
    if (p[i] != 0) return false;
  }
  return true;
}

}  // namespace

CharRoots factor_char_poly(const RatPoly& input) {
  CharRoots out;
  RatPoly p = input;
  poly_trim(p);
  if (p.empty()) fail(ErrorCode::Internal, "zero characteristic polynomial");

  // x^m factor = zero eigenvalues (transient part).
  std::size_t zero_mult = 0;
  while (zero_mult < p.size() && p[zero_mult] == 0) ++zero_mult;
  out.zero_multiplicity = static_cast<unsigned>(zero_mult);
  p.erase(p.begin(), p.begin() + static_cast<long>(zero_mult));

  for (auto& [r, mult] : extract_rational_roots(p)) {
    out.roots.push_back({Surd(Scalar(r)), mult});
  }
  poly_trim(p);
  int deg = poly_degree(p);
  if (deg <= 0) return out;

  if (deg == 1) {
    out.roots.push_back({Surd(Scalar(-p[0] / p[1])), 1});
    return out;
  }

  if (deg == 2) {
    Rational a = p[2], b = p[1], c = p[0];
    Rational disc = b * b - Rational(4) * a * c;
    if (disc < 0) {
      out.unresolved = "complex eigenvalue pair (negative discriminant)";
      return out;
    }
    if (disc == 0) {
      out.roots.push_back({Surd(Scalar(-b / (Rational(2) * a))), 2});
      return out;
    }
    Surd root_d = Surd::sqrt_of(disc);
    Scalar half_inv = Scalar(Rational(1) / (Rational(2) * a));
    Surd r1 = (Surd(Scalar(-b)) + root_d) * Surd(half_inv);
    Surd r2 = (Surd(Scalar(-b)) - root_d) * Surd(half_inv);
    out.roots.push_back({r1, 1});
    out.roots.push_back({r2, 1});
    return out;
  }

  if (is_even_poly(p)) {
    // Substitute y = x^2 and recurse on the rational roots of q(y).
    RatPoly q((p.size() + 1) / 2, Rational(0));
    for (std::size_t i = 0; i < p.size(); i += 2) q[i / 2] = p[i];
    auto yroots = extract_rational_roots(q);
    poly_trim(q);
    if (poly_degree(q) > 0) {
      // x-roots of an irrational y would be nested radicals.
      out.unresolved = "even factor with irrational squared eigenvalues (nested radicals)";
    }
    for (const auto& [r, mult] : yroots) {
      if (r < 0) {
        out.unresolved = "complex eigenvalue pair (negative squared eigenvalue)";
        continue;
      }
      Surd root = Surd::sqrt_of(r);
      out.roots.push_back({root, mult});
      out.roots.push_back({-root, mult});
    }
    return out;
  }

  out.unresolved = "irreducible characteristic factor of degree " + std::to_string(deg);
  return out;
}

}  // namespace momentforge

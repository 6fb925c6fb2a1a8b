#include "momentforge/sympoly.hpp"

#include <algorithm>
#include <sstream>

#include "momentforge/errors.hpp"

namespace momentforge {

SymPoly::SymPoly(const Rational& c) {
  if (c != 0) terms_[SymMonomial{}] = c;
}

SymPoly SymPoly::constant(const Rational& c) { return SymPoly(c); }

SymPoly SymPoly::symbol(const std::string& name) {
  SymPoly p;
  p.terms_[SymMonomial{{name, 1}}] = Rational(1);
  return p;
}

bool SymPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

bool SymPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1;
}

Rational SymPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

void SymPoly::add_term(const SymMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SymPoly SymPoly::operator-() const {
  SymPoly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

SymPoly SymPoly::operator+(const SymPoly& o) const {
  SymPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

SymPoly SymPoly::operator-(const SymPoly& o) const {
  SymPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

SymPoly SymPoly::operator*(const SymPoly& o) const {
  SymPoly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      SymMonomial m = ma;
      for (const auto& [sym, e] : mb) m[sym] += e;
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

SymPoly SymPoly::scaled(const Rational& c) const {
  SymPoly r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

SymPoly SymPoly::pow(unsigned e) const {
  SymPoly r = SymPoly::constant(Rational(1));
  SymPoly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

void SymPoly::collect_symbols(std::set<std::string>& out) const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [sym, e] : m) out.insert(sym);
  }
}

std::set<std::string> SymPoly::symbols() const {
  std::set<std::string> s;
  collect_symbols(s);
  return s;
}

Rational SymPoly::leading_coefficient() const {
  if (terms_.empty()) return Rational(0);
  return terms_.rbegin()->second;
}

SymMonomial SymPoly::leading_monomial() const {
  if (terms_.empty()) return SymMonomial{};
  return terms_.rbegin()->first;
}

unsigned SymPoly::degree_in(const std::string& sym) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(sym);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

unsigned SymPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    unsigned t = 0;
    for (const auto& [sym, e] : m) t += e;
    d = std::max(d, t);
  }
  return d;
}

Rational SymPoly::evaluate(const std::map<std::string, Rational>& bindings) const {
  Rational out(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [sym, e] : m) {
      auto it = bindings.find(sym);
      if (it == bindings.end()) {
        fail(ErrorCode::ValidationError, "unbound symbolic constant '" + sym + "'");
      }
      t *= rational_pow(it->second, e);
    }
    out += t;
  }
  return out;
}

SymPoly SymPoly::substitute(const std::map<std::string, Rational>& bindings) const {
  SymPoly out;
  for (const auto& [m, c] : terms_) {
    Rational coeff = c;
    SymMonomial rest;
    for (const auto& [sym, e] : m) {
      auto it = bindings.find(sym);
      if (it == bindings.end()) {
        rest[sym] = e;
      } else {
        coeff *= rational_pow(it->second, e);
      }
    }
    out.add_term(rest, coeff);
  }
  return out;
}

std::string SymPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print largest monomial first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational coeff = c;
    if (first) {
      if (coeff < 0) {
        os << "-";
        coeff = -coeff;
      }
    } else {
      os << (coeff < 0 ? " - " : " + ");
      if (coeff < 0) coeff = -coeff;
    }
    first = false;
    bool coeff_is_one = coeff == 1 && !m.empty();
    if (!coeff_is_one) os << rational_to_string(coeff);
    bool first_factor = coeff_is_one;
    for (const auto& [sym, e] : m) {
      if (!first_factor) os << "*";
      first_factor = false;
      os << sym;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

namespace {

// Univariate view of a SymPoly in one "main" symbol: coefficients are
// SymPolys in the remaining symbols, indexed by the main symbol's power.
std::vector<SymPoly> to_univariate(const SymPoly& p, const std::string& main) {
  std::vector<SymPoly> coeffs(p.degree_in(main) + 1);
  for (const auto& [m, c] : p.terms()) {
    unsigned e = 0;
    SymMonomial rest;
    for (const auto& [sym, pw] : m) {
      if (sym == main) {
        e = pw;
      } else {
        rest[sym] = pw;
      }
    }
    coeffs[e].add_term(rest, c);
  }
  return coeffs;
}

SymPoly from_univariate(const std::vector<SymPoly>& coeffs, const std::string& main) {
  SymPoly out;
  for (unsigned e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e].is_zero()) continue;
    SymPoly main_pow = SymPoly::symbol(main).pow(e);
    out = out + coeffs[e] * main_pow;
  }
  return out;
}

int uni_degree(const std::vector<SymPoly>& c) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    if (!c[i].is_zero()) return i;
  }
  return -1;
}

// Pseudo-remainder of a by b in the univariate view (b non-zero).
std::vector<SymPoly> pseudo_rem(std::vector<SymPoly> a, const std::vector<SymPoly>& b) {
  int db = uni_degree(b);
  const SymPoly& lb = b[db];
  int da = uni_degree(a);
  while (da >= db) {
    SymPoly la = a[da];
    // a := lb*a - la * x^(da-db) * b
    for (auto& c : a) c = lb * c;
    for (int i = 0; i <= db; ++i) {
      a[da - db + i] = a[da - db + i] - la * b[i];
    }
    int nda = -1;
    for (int i = da; i >= 0; --i) {
      if (!a[i].is_zero()) {
        nda = i;
        break;
      }
    }
    if (nda == da) {
      fail(ErrorCode::Internal, "pseudo-remainder failed to reduce degree");
    }
    da = nda;
  }
  a.resize(static_cast<std::size_t>(std::max(da, 0)) + 1);
  if (da < 0) a.clear();
  return a;
}

SymPoly content_of(const std::vector<SymPoly>& coeffs) {
  SymPoly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : sympoly_gcd(g, c);
    if (g.is_one()) break;
  }
  return g.is_zero() ? SymPoly::constant(Rational(1)) : g;
}

SymPoly make_monic(const SymPoly& p) {
  Rational lc = p.leading_coefficient();
  if (lc == 0 || lc == 1) return p;
  return p.scaled(Rational(1) / lc);
}

}  // namespace

SymPoly sympoly_div_exact(const SymPoly& a, const SymPoly& b) {
  if (b.is_zero()) fail(ErrorCode::Internal, "division by zero polynomial");
  if (b.is_constant()) return a.scaled(Rational(1) / b.constant_value());
  SymPoly rem = a;
  SymPoly quot;
  SymMonomial lb = b.leading_monomial();
  Rational lbc = b.leading_coefficient();
  while (!rem.is_zero()) {
    SymMonomial lm = rem.leading_monomial();
    Rational lc = rem.leading_coefficient();
    // lm / lb must be a monomial.
    SymMonomial q = lm;
    bool divisible = true;
    for (const auto& [sym, e] : lb) {
      auto it = q.find(sym);
      if (it == q.end() || it->second < e) {
        divisible = false;
        break;
      }
      it->second -= e;
      if (it->second == 0) q.erase(it);
    }
    if (!divisible) fail(ErrorCode::Internal, "inexact polynomial division");
    Rational qc = lc / lbc;
    SymPoly qterm;
    qterm.add_term(q, qc);
    quot = quot + qterm;
    rem = rem - qterm * b;
  }
  return quot;
}

SymPoly sympoly_gcd(const SymPoly& a, const SymPoly& b) {
  if (a.is_zero() && b.is_zero()) return SymPoly::constant(Rational(0));
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return SymPoly::constant(Rational(1));

  std::set<std::string> syms = a.symbols();
  b.collect_symbols(syms);
  const std::string main = *syms.begin();

  auto ua = to_univariate(a, main);
  auto ub = to_univariate(b, main);
  SymPoly ca = content_of(ua);
  SymPoly cb = content_of(ub);
  SymPoly content_gcd = sympoly_gcd(ca, cb);

  // Primitive parts.
  for (auto& c : ua) {
    if (!c.is_zero()) c = sympoly_div_exact(c, ca);
  }
  for (auto& c : ub) {
    if (!c.is_zero()) c = sympoly_div_exact(c, cb);
  }

  // Primitive PRS in the main symbol.
  std::vector<SymPoly> f = ua, g = ub;
  if (uni_degree(f) < uni_degree(g)) std::swap(f, g);
  while (true) {
    auto r = pseudo_rem(f, g);
    if (uni_degree(r) < 0) break;
    SymPoly cr = content_of(r);
    for (auto& c : r) {
      if (!c.is_zero()) c = sympoly_div_exact(c, cr);
    }
    f = std::move(g);
    g = std::move(r);
  }

  SymPoly prim = from_univariate(g, main);
  return make_monic(content_gcd * prim);
}

}  // namespace momentforge

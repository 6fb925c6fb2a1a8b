#include "momentforge/exppoly.hpp"

#include <algorithm>
#include <sstream>

#include "momentforge/errors.hpp"

namespace momentforge {

unsigned ExpTerm::degree() const {
  for (std::size_t j = coeff.size(); j > 0; --j) {
    if (!coeff[j - 1].is_zero()) return static_cast<unsigned>(j - 1);
  }
  return 0;
}

Surd ExpTerm::coeff_at(unsigned j) const {
  return j < coeff.size() ? coeff[j] : Surd();
}

ExpPoly ExpPoly::constant(const Surd& c) { return geometric(c, Surd(Scalar(Rational(1)))); }

ExpPoly ExpPoly::geometric(const Surd& c, const Surd& base) {
  return term({c}, base);
}

ExpPoly ExpPoly::term(std::vector<Surd> coeff, const Surd& base) {
  ExpPoly p;
  p.add_term(ExpTerm{std::move(coeff), base});
  return p.simplified();
}

bool ExpPoly::is_constant() const {
  if (!corrections_.empty()) return false;
  for (const auto& t : terms_) {
    bool base_one = t.base == Surd(Scalar(Rational(1)));
    if (!base_one) return false;
    if (t.degree() > 0) return false;
  }
  return true;
}

Surd ExpPoly::eval_tail(std::uint64_t n) const {
  Surd out;
  Surd nval(Scalar(Rational(static_cast<long>(n))));
  for (const auto& t : terms_) {
    // q(n)
    Surd q;
    Surd npow(Scalar(Rational(1)));
    for (std::size_t j = 0; j < t.coeff.size(); ++j) {
      if (!t.coeff[j].is_zero()) q += t.coeff[j] * npow;
      npow = npow * nval;
    }
    if (q.is_zero()) continue;
    if (t.base.is_zero()) {
      // 0^n: contributes only at n = 0 (0^0 := 1), normally normalized away.
      if (n == 0) out += q;
      continue;
    }
    out += q * t.base.pow(n);
  }
  return out;
}

Surd ExpPoly::eval(std::uint64_t n) const {
  Surd out = eval_tail(n);
  auto it = corrections_.find(n);
  if (it != corrections_.end()) out += it->second;
  return out;
}

ExpPoly ExpPoly::shifted() const {
  ExpPoly out;
  for (const auto& t : terms_) {
    // q(n+1) u^(n+1) = u * (binomial expansion of q at n+1) * u^n
    ExpTerm nt;
    nt.base = t.base;
    nt.coeff.assign(t.coeff.size(), Surd());
    for (std::size_t j = 0; j < t.coeff.size(); ++j) {
      if (t.coeff[j].is_zero()) continue;
      for (std::size_t i = 0; i <= j; ++i) {
        Surd bin(Scalar(rational_binomial(static_cast<unsigned long>(j),
                                          static_cast<unsigned long>(i))));
        nt.coeff[i] += t.coeff[j] * bin;
      }
    }
    for (auto& c : nt.coeff) c = c * t.base;
    out.terms_.push_back(std::move(nt));
  }
  for (const auto& [n, v] : corrections_) {
    if (n == 0) continue;
    out.corrections_[n - 1] = v;
  }
  return out.simplified();
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r;
  for (const auto& t : terms_) {
    ExpTerm nt = t;
    for (auto& c : nt.coeff) c = -c;
    r.terms_.push_back(std::move(nt));
  }
  for (const auto& [n, v] : corrections_) r.corrections_[n] = -v;
  return r;
}

ExpPoly ExpPoly::operator+(const ExpPoly& o) const {
  ExpPoly r = *this;
  for (const auto& t : o.terms_) r.terms_.push_back(t);
  for (const auto& [n, v] : o.corrections_) r.add_correction(n, v);
  return r.simplified();
}

ExpPoly ExpPoly::operator-(const ExpPoly& o) const { return *this + (-o); }

ExpPoly ExpPoly::operator*(const ExpPoly& o) const {
  ExpPoly tail;
  for (const auto& ta : terms_) {
    for (const auto& tb : o.terms_) {
      ExpTerm t;
      t.base = ta.base * tb.base;
      t.coeff.assign(ta.coeff.size() + tb.coeff.size(), Surd());
      for (std::size_t i = 0; i < ta.coeff.size(); ++i) {
        if (ta.coeff[i].is_zero()) continue;
        for (std::size_t j = 0; j < tb.coeff.size(); ++j) {
          if (tb.coeff[j].is_zero()) continue;
          t.coeff[i + j] += ta.coeff[i] * tb.coeff[j];
        }
      }
      tail.terms_.push_back(std::move(t));
    }
  }
  // Corrections: fix up every point where either factor deviates from its tail.
  for (const auto& [n, v] : corrections_) {
    Surd want = eval(n) * o.eval(n);
    tail.add_correction(n, want - tail.eval_tail(n));
  }
  for (const auto& [n, v] : o.corrections_) {
    if (corrections_.count(n)) continue;
    Surd want = eval(n) * o.eval(n);
    tail.add_correction(n, want - tail.eval_tail(n));
  }
  return tail.simplified();
}

ExpPoly ExpPoly::scaled(const Surd& c) const {
  ExpPoly r;
  if (c.is_zero()) return r;
  for (const auto& t : terms_) {
    ExpTerm nt = t;
    for (auto& cc : nt.coeff) cc = cc * c;
    r.terms_.push_back(std::move(nt));
  }
  for (const auto& [n, v] : corrections_) r.corrections_[n] = v * c;
  return r.simplified();
}

ExpPoly ExpPoly::pow(unsigned e) const {
  ExpPoly r = ExpPoly::constant(Surd(Scalar(Rational(1))));
  ExpPoly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

void ExpPoly::add_term(const ExpTerm& t) { terms_.push_back(t); }

void ExpPoly::add_correction(std::uint64_t n, const Surd& delta) {
  if (delta.is_zero()) return;
  auto it = corrections_.find(n);
  if (it == corrections_.end()) {
    corrections_[n] = delta;
  } else {
    it->second += delta;
    if (it->second.is_zero()) corrections_.erase(it);
  }
}

ExpPoly ExpPoly::simplified() const {
  std::map<Surd, std::vector<Surd>> by_base;
  for (const auto& t : terms_) {
    auto& acc = by_base[t.base];
    if (acc.size() < t.coeff.size()) acc.resize(t.coeff.size(), Surd());
    for (std::size_t j = 0; j < t.coeff.size(); ++j) acc[j] += t.coeff[j];
  }
  ExpPoly out;
  out.corrections_ = corrections_;
  for (auto& [base, coeff] : by_base) {
    while (!coeff.empty() && coeff.back().is_zero()) coeff.pop_back();
    bool all_zero = true;
    for (const auto& c : coeff) {
      if (!c.is_zero()) {
        all_zero = false;
        break;
      }
    }
    if (coeff.empty() || all_zero) continue;
    if (base.is_zero()) {
      // q(n)*0^n == q(0) at n=0 only.
      out.add_correction(0, coeff[0]);
      continue;
    }
    out.terms_.push_back(ExpTerm{coeff, base});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const ExpTerm& x, const ExpTerm& y) { return x.base < y.base; });
  for (auto it = out.corrections_.begin(); it != out.corrections_.end();) {
    if (it->second.is_zero()) {
      it = out.corrections_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

bool ExpPoly::terms_same(const ExpPoly& x, const ExpPoly& y) {
  if (x.terms_.size() != y.terms_.size()) return false;
  for (std::size_t i = 0; i < x.terms_.size(); ++i) {
    if (!(x.terms_[i].base == y.terms_[i].base)) return false;
    const auto& a = x.terms_[i].coeff;
    const auto& b = y.terms_[i].coeff;
    std::size_t mx = std::max(a.size(), b.size());
    for (std::size_t j = 0; j < mx; ++j) {
      Surd ca = j < a.size() ? a[j] : Surd();
      Surd cb = j < b.size() ? b[j] : Surd();
      if (!(ca == cb)) return false;
    }
  }
  return true;
}

bool ExpPoly::equivalent(const ExpPoly& o) const {
  ExpPoly a = simplified();
  ExpPoly b = o.simplified();
  return a == b;
}

namespace {

std::string base_power_string(const Surd& base) {
  if (base.is_plain()) {
    std::string s = base.plain().to_string();
    bool needs_paren = s.find_first_of("+-*/ ") != std::string::npos && !(s.front() == '(');
    return (needs_paren ? "(" + s + ")" : s) + "^n";
  }
  // a + b*sqrt(d): render sqrt(d)^n as d^(n/2) when a == 0.
  if (base.a().is_zero()) {
    std::string b = base.b().to_string();
    std::string factor;
    if (b == "1") {
      factor = "";
    } else if (b == "-1") {
      factor = "(-1)^n*";
    } else {
      bool needs_paren = b.find_first_of("+-*/ ") != std::string::npos && b.front() != '(';
      factor = (needs_paren ? "(" + b + ")" : b) + "^n*";
    }
    return factor + std::to_string(base.d()) + "^(n/2)";
  }
  return "(" + base.to_string() + ")^n";
}

std::string poly_in_n_string(const std::vector<Surd>& coeff) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    if (coeff[j].is_zero()) continue;
    std::string cs = coeff[j].to_string();
    bool neg = !cs.empty() && cs[0] == '-' && cs.find(' ') == std::string::npos;
    std::string mag = neg ? cs.substr(1) : cs;
    bool composite = mag.find_first_of("+- ") != std::string::npos;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (j == 0) {
      os << (composite && neg ? "(" + mag + ")" : mag);
    } else {
      std::string npart = (j == 1) ? "n" : "n^" + std::to_string(j);
      if (mag == "1") {
        os << npart;
      } else {
        os << (composite ? "(" + mag + ")" : mag) << "*" << npart;
      }
    }
  }
  if (first) return "0";
  return os.str();
}

}  // namespace

std::string ExpPoly::to_string() const {
  if (terms_.empty() && corrections_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::string q = poly_in_n_string(t.coeff);
    bool base_one = t.base == Surd(Scalar(Rational(1)));
    std::string piece;
    if (base_one) {
      piece = q;
    } else if (q == "1") {
      piece = base_power_string(t.base);
    } else {
      bool composite = q.find_first_of("+- ") != std::string::npos && q[0] != '(';
      piece = (composite ? "(" + q + ")" : q) + "*" + base_power_string(t.base);
    }
    if (!first) os << " + ";
    os << piece;
    first = false;
  }
  for (const auto& [n, v] : corrections_) {
    if (!first) os << " + ";
    os << "[n=" << n << "](" << v.to_string() << ")";
    first = false;
  }
  return os.str();
}

}  // namespace momentforge

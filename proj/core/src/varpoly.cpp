#include "momentforge/varpoly.hpp"

#include <sstream>

#include "momentforge/errors.hpp"

namespace momentforge {

unsigned monomial_total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

std::string monomial_to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : m) {
    if (!first) os << "*";
    first = false;
    os << v;
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

VarPoly::VarPoly(const Scalar& c) {
  if (!c.is_zero()) terms_[Monomial{}] = c;
}

VarPoly VarPoly::constant(const Scalar& c) { return VarPoly(c); }

VarPoly VarPoly::variable(const std::string& name) {
  VarPoly p;
  p.terms_[Monomial{{name, 1}}] = Scalar(Rational(1));
  return p;
}

VarPoly VarPoly::monomial(const Monomial& m, const Scalar& c) {
  VarPoly p;
  if (!c.is_zero()) p.terms_[m] = c;
  return p;
}

bool VarPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar VarPoly::constant_value() const {
  if (terms_.empty()) return Scalar(Rational(0));
  if (!is_constant()) {
    fail(ErrorCode::Internal, "polynomial is not constant: " + to_string());
  }
  return terms_.begin()->second;
}

void VarPoly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

VarPoly VarPoly::operator-() const {
  VarPoly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

VarPoly VarPoly::operator+(const VarPoly& o) const {
  VarPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

VarPoly VarPoly::operator-(const VarPoly& o) const {
  VarPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

VarPoly VarPoly::operator*(const VarPoly& o) const {
  VarPoly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

VarPoly VarPoly::scaled(const Scalar& c) const {
  VarPoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

VarPoly VarPoly::pow(unsigned e) const {
  VarPoly r = VarPoly::constant(Scalar(Rational(1)));
  VarPoly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

void VarPoly::collect_vars(std::set<std::string>& out) const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m) out.insert(v);
  }
}

std::set<std::string> VarPoly::vars() const {
  std::set<std::string> s;
  collect_vars(s);
  return s;
}

unsigned VarPoly::degree_in(const std::string& var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(var);
    if (it != m.end() && it->second > d) d = it->second;
  }
  return d;
}

Scalar VarPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(Rational(0)) : it->second;
}

VarPoly VarPoly::substitute(const std::string& var, const VarPoly& replacement) const {
  VarPoly out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(var);
    if (it == m.end()) {
      out.add_term(m, c);
      continue;
    }
    unsigned e = it->second;
    Monomial rest = m;
    rest.erase(var);
    VarPoly piece = replacement.pow(e) * VarPoly::monomial(rest, c);
    out = out + piece;
  }
  return out;
}

Scalar VarPoly::evaluate(const std::map<std::string, Scalar>& assignment) const {
  Scalar out(Rational(0));
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (const auto& [v, e] : m) {
      auto it = assignment.find(v);
      if (it == assignment.end()) {
        fail(ErrorCode::Internal, "no value for variable '" + v + "'");
      }
      t *= it->second.pow(e);
    }
    out += t;
  }
  return out;
}

std::string VarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string cs = c.to_string();
    bool neg = !cs.empty() && cs[0] == '-';
    std::string mag = neg ? cs.substr(1) : cs;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (m.empty()) {
      os << mag;
    } else if (mag == "1") {
      os << monomial_to_string(m);
    } else {
      os << mag << "*" << monomial_to_string(m);
    }
  }
  return os.str();
}

}  // namespace momentforge

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "momentforge/surd.hpp"

namespace momentforge {

// One summand q(n) * base^n of an exponential polynomial. coeff[j] is the
// coefficient of n^j in q.
struct ExpTerm {
  std::vector<Surd> coeff;
  Surd base;

  unsigned degree() const;
  Surd coeff_at(unsigned j) const;
};

// Exponential polynomial in the loop counter n: sum of q_i(n) * u_i^n plus
// finitely many pointwise corrections (these absorb nilpotent transients,
// including the base-0 contribution at n = 0).
class ExpPoly {
 public:
  ExpPoly() = default;
  static ExpPoly constant(const Surd& c);
  static ExpPoly zero() { return ExpPoly(); }
  // c * base^n
  static ExpPoly geometric(const Surd& c, const Surd& base);
  // q(n) * base^n
  static ExpPoly term(std::vector<Surd> coeff, const Surd& base);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  const std::map<std::uint64_t, Surd>& corrections() const { return corrections_; }

  bool is_zero() const { return terms_.empty() && corrections_.empty(); }
  bool is_constant() const;

  Surd eval(std::uint64_t n) const;
  // Tail value ignoring pointwise corrections.
  Surd eval_tail(std::uint64_t n) const;

  // f(n+1) as a function of n; corrections move down one index.
  ExpPoly shifted() const;

  ExpPoly operator-() const;
  ExpPoly operator+(const ExpPoly& o) const;
  ExpPoly operator-(const ExpPoly& o) const;
  ExpPoly operator*(const ExpPoly& o) const;
  ExpPoly scaled(const Surd& c) const;
  ExpPoly pow(unsigned e) const;

  void add_term(const ExpTerm& t);
  void add_correction(std::uint64_t n, const Surd& delta);

  // Merge equal bases, drop zero coefficients, convert base-0 terms into
  // corrections, sort terms deterministically. Idempotent and
  // evaluation-equivalent at every n.
  ExpPoly simplified() const;

  // Structural equality of simplified forms.
  bool equivalent(const ExpPoly& o) const;
  bool operator==(const ExpPoly& o) const {
    return terms_same(*this, o) && corrections_ == o.corrections_;
  }

  std::string to_string() const;

 private:
  static bool terms_same(const ExpPoly& x, const ExpPoly& y);

  std::vector<ExpTerm> terms_;
  std::map<std::uint64_t, Surd> corrections_;
};

}  // namespace momentforge

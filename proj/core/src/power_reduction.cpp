#include "momentforge/power_reduction.hpp"

#include <algorithm>
#include <functional>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/printer.hpp"

namespace momentforge {

namespace {

void require_distinct(const std::vector<Scalar>& support) {
  if (support.empty()) fail(ErrorCode::DegenerateSupport, "empty support");
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      Scalar diff = support[i] - support[j];
      if (diff.is_zero()) {
        fail(ErrorCode::DegenerateSupport,
             "support elements coincide: " + support[i].to_string());
      }
      if (!diff.is_rational()) {
        fail(ErrorCode::DegenerateSupport,
             "support elements not separable symbolically: " + support[i].to_string() +
                 " vs " + support[j].to_string());
      }
    }
  }
}

}  // namespace

std::vector<std::vector<Scalar>> inverse_via_symmetric_polys(const std::vector<Scalar>& support) {
  require_distinct(support);
  const std::size_t m = support.size();
  std::vector<std::vector<Scalar>> inv(m, std::vector<Scalar>(m, Scalar(Rational(0))));
  for (std::size_t i = 0; i < m; ++i) {
    // Elementary symmetric polynomials of the support without element i.
    std::vector<Scalar> e(m, Scalar(Rational(0)));
    e[0] = Scalar(Rational(1));
    std::size_t used = 0;
    Scalar denom(Rational(1));
    for (std::size_t l = 0; l < m; ++l) {
      if (l == i) continue;
      for (std::size_t k = used + 1; k > 0; --k) {
        e[k] = e[k] + e[k - 1] * support[l];
      }
      ++used;
      denom *= support[l] - support[i];
    }
    Scalar denom_inv = denom.inverse();
    for (std::size_t c = 0; c < m; ++c) {
      Scalar val = e[m - 1 - c] * denom_inv;
      if (c % 2 == 1) val = -val;
      inv[i][c] = val;
    }
  }
  return inv;
}

ReductionTable ReductionTable::build(const std::vector<Scalar>& support) {
  require_distinct(support);
  ReductionTable t;
  t.support = support;
  const std::size_t m = support.size();
  t.matrix.assign(m, std::vector<Scalar>(m, Scalar(Rational(0))));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      t.matrix[i][j] = support[j].pow(static_cast<unsigned>(i));  // 0^0 := 1
    }
  }
  t.inverse = inverse_via_symmetric_polys(support);
  return t;
}

std::vector<Scalar> reduce_power(const std::vector<Scalar>& support, unsigned k) {
  require_distinct(support);
  const std::size_t m = support.size();
  std::vector<Scalar> out(m, Scalar(Rational(0)));
  if (k < m) {
    out[k] = Scalar(Rational(1));
    return out;
  }
  auto inv = inverse_via_symmetric_polys(support);
  for (std::size_t j = 0; j < m; ++j) {
    Scalar c(Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      c += support[i].pow(k) * inv[i][j];
    }
    out[j] = c;
  }
  return out;
}

VarPoly reduce_finite_powers(const VarPoly& poly, const TypeEnv& types) {
  VarPoly current = poly;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [mono, coeff] : current.terms()) {
      for (const auto& [var, e] : mono) {
        auto it = types.find(var);
        if (it == types.end() || it->second.infinite) continue;
        const std::size_t m = it->second.values.size();
        if (e < m) continue;
        // Rewrite this term: x^e -> sum c_i x^i on the support.
        std::vector<Scalar> coeffs = reduce_power(it->second.values, e);
        Monomial rest = mono;
        rest.erase(var);
        VarPoly replacement;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
          if (coeffs[i].is_zero()) continue;
          Monomial mi = rest;
          if (i > 0) mi[var] = static_cast<unsigned>(i);
          replacement.add_term(mi, coeff * coeffs[i]);
        }
        VarPoly next = current - VarPoly::monomial(mono, coeff) + replacement;
        current = std::move(next);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return current;
}

namespace {

// [x = value] over the variable's support.
VarPoly equality_indicator(const std::string& var, const Scalar& value,
                           const std::vector<Scalar>& support) {
  VarPoly out = VarPoly::constant(Scalar(Rational(1)));
  for (const auto& d : support) {
    if (d == value) continue;
    Scalar denom = value - d;
    out = out * (VarPoly::variable(var) - VarPoly::constant(d)).scaled(denom.inverse());
  }
  return out;
}

class IndicatorBuilder {
 public:
  IndicatorBuilder(const TypeEnv& types, const std::set<std::string>& variables)
      : types_(types), variables_(variables) {}

  VarPoly build(const BoolPtr& cond) {
    switch (cond->kind) {
      case BoolExpr::Kind::True:
        return VarPoly::constant(Scalar(Rational(1)));
      case BoolExpr::Kind::False:
        return VarPoly();
      case BoolExpr::Kind::Not:
        return reduce(VarPoly::constant(Scalar(Rational(1))) - build(cond->a));
      case BoolExpr::Kind::And:
        return reduce(build(cond->a) * build(cond->b));
      case BoolExpr::Kind::Or: {
        VarPoly na = VarPoly::constant(Scalar(Rational(1))) - build(cond->a);
        VarPoly nb = VarPoly::constant(Scalar(Rational(1))) - build(cond->b);
        return reduce(VarPoly::constant(Scalar(Rational(1))) - na * nb);
      }
      case BoolExpr::Kind::Cmp:
        return comparison(cond);
    }
    fail(ErrorCode::Internal, "unreachable condition kind");
  }

 private:
  VarPoly reduce(const VarPoly& p) const { return reduce_finite_powers(p, types_); }

  VarPoly comparison(const BoolPtr& cond) {
    VarPoly lhs = expr_to_varpoly(cond->lhs, variables_);
    VarPoly rhs = expr_to_varpoly(cond->rhs, variables_);
    VarPoly diff = lhs - rhs;
    std::vector<std::string> vars;
    std::size_t combos = 1;
    for (const auto& v : diff.vars()) {
      auto it = types_.find(v);
      if (it == types_.end() || it->second.infinite) {
        fail(ErrorCode::NonFiniteCondition,
             "condition contains non-finite variable '" + v + "': " + bool_to_string(cond));
      }
      vars.push_back(v);
      combos *= it->second.values.size();
      if (combos > 100000) {
        fail(ErrorCode::IncomparableSupport, "condition support too large to enumerate");
      }
    }
    // Sum of satisfying-assignment basis products.
    VarPoly out;
    std::map<std::string, Scalar> assignment;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == vars.size()) {
        if (!satisfied(diff.evaluate(assignment), cond)) return;
        VarPoly prod = VarPoly::constant(Scalar(Rational(1)));
        for (const auto& v : vars) {
          prod = prod * equality_indicator(v, assignment.at(v), types_.at(v).values);
        }
        out = out + prod;
        return;
      }
      for (const auto& val : types_.at(vars[i]).values) {
        assignment[vars[i]] = val;
        rec(i + 1);
      }
      assignment.erase(vars[i]);
    };
    rec(0);
    return reduce(out);
  }

  bool satisfied(const Scalar& diff, const BoolPtr& cond) const {
    if (cond->op == CmpOp::Eq || cond->op == CmpOp::Ne) {
      bool eq;
      if (diff.is_zero()) {
        eq = true;
      } else if (diff.is_rational()) {
        eq = false;
      } else {
        fail(ErrorCode::IncomparableSupport,
             "cannot decide equality of symbolic values: " + diff.to_string());
      }
      return cond->op == CmpOp::Eq ? eq : !eq;
    }
    if (!diff.is_rational()) {
      fail(ErrorCode::IncomparableSupport,
           "cannot order symbolic values: " + diff.to_string());
    }
    Rational r = diff.as_rational();
    switch (cond->op) {
      case CmpOp::Lt: return r < 0;
      case CmpOp::Gt: return r > 0;
      case CmpOp::Le: return r <= 0;
      case CmpOp::Ge: return r >= 0;
      default: return false;
    }
  }

  const TypeEnv& types_;
  const std::set<std::string>& variables_;
};

}  // namespace

VarPoly indicator_poly(const BoolPtr& cond, const TypeEnv& types,
                       const std::set<std::string>& variables) {
  return IndicatorBuilder(types, variables).build(cond ? cond : bool_true());
}

}  // namespace momentforge

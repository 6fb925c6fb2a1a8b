#include "momentforge/convert.hpp"

#include "momentforge/errors.hpp"

namespace momentforge {

bool expr_is_const(const ExprPtr& e, const std::set<std::string>& variables) {
  std::set<std::string> ids;
  expr_collect_idents(e, ids);
  for (const auto& id : ids) {
    if (variables.count(id)) return false;
  }
  return true;
}

std::optional<Rational> expr_numeric_value(const ExprPtr& e) {
  if (!e) return std::nullopt;
  switch (e->kind) {
    case Expr::Kind::Number: return e->number;
    case Expr::Kind::Ident: return std::nullopt;
    case Expr::Kind::Neg: {
      auto v = expr_numeric_value(e->lhs);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Expr::Kind::Pow: {
      auto v = expr_numeric_value(e->lhs);
      if (!v) return std::nullopt;
      return rational_pow(*v, e->exponent);
    }
    default: {
      auto a = expr_numeric_value(e->lhs);
      auto b = expr_numeric_value(e->rhs);
      if (!a || !b) return std::nullopt;
      switch (e->kind) {
        case Expr::Kind::Add: return *a + *b;
        case Expr::Kind::Sub: return *a - *b;
        case Expr::Kind::Mul: return *a * *b;
        case Expr::Kind::Div:
          if (*b == 0) return std::nullopt;
          return *a / *b;
        default: return std::nullopt;
      }
    }
  }
}

Scalar expr_to_scalar(const ExprPtr& e, const std::set<std::string>& variables) {
  if (!e) fail(ErrorCode::Internal, "null expression");
  switch (e->kind) {
    case Expr::Kind::Number:
      return Scalar(e->number);
    case Expr::Kind::Ident:
      if (variables.count(e->ident)) {
        fail(ErrorCode::ValidationError,
             "program variable '" + e->ident + "' in a constant expression");
      }
      return Scalar::symbol(e->ident);
    case Expr::Kind::Neg:
      return -expr_to_scalar(e->lhs, variables);
    case Expr::Kind::Pow:
      return expr_to_scalar(e->lhs, variables).pow(e->exponent);
    case Expr::Kind::Add:
      return expr_to_scalar(e->lhs, variables) + expr_to_scalar(e->rhs, variables);
    case Expr::Kind::Sub:
      return expr_to_scalar(e->lhs, variables) - expr_to_scalar(e->rhs, variables);
    case Expr::Kind::Mul:
      return expr_to_scalar(e->lhs, variables) * expr_to_scalar(e->rhs, variables);
    case Expr::Kind::Div: {
      Scalar den = expr_to_scalar(e->rhs, variables);
      if (den.is_zero()) fail(ErrorCode::ZeroDenominator, "division by zero constant");
      return expr_to_scalar(e->lhs, variables) / den;
    }
  }
  fail(ErrorCode::Internal, "unreachable expression kind");
}

VarPoly expr_to_varpoly(const ExprPtr& e, const std::set<std::string>& variables) {
  if (!e) fail(ErrorCode::Internal, "null expression");
  switch (e->kind) {
    case Expr::Kind::Number:
      return VarPoly::constant(Scalar(e->number));
    case Expr::Kind::Ident:
      if (variables.count(e->ident)) return VarPoly::variable(e->ident);
      return VarPoly::constant(Scalar::symbol(e->ident));
    case Expr::Kind::Neg:
      return -expr_to_varpoly(e->lhs, variables);
    case Expr::Kind::Pow:
      return expr_to_varpoly(e->lhs, variables).pow(e->exponent);
    case Expr::Kind::Add:
      return expr_to_varpoly(e->lhs, variables) + expr_to_varpoly(e->rhs, variables);
    case Expr::Kind::Sub:
      return expr_to_varpoly(e->lhs, variables) - expr_to_varpoly(e->rhs, variables);
    case Expr::Kind::Mul:
      return expr_to_varpoly(e->lhs, variables) * expr_to_varpoly(e->rhs, variables);
    case Expr::Kind::Div: {
      Scalar den = expr_to_scalar(e->rhs, variables);
      if (den.is_zero()) fail(ErrorCode::ZeroDenominator, "division by zero constant");
      return expr_to_varpoly(e->lhs, variables).scaled(den.inverse());
    }
  }
  fail(ErrorCode::Internal, "unreachable expression kind");
}

std::vector<Scalar> categorical_probs(const Categorical& cat,
                                      const std::set<std::string>& variables) {
  std::vector<Scalar> probs;
  Scalar sum(Rational(0));
  bool last_omitted = false;
  for (std::size_t i = 0; i < cat.options.size(); ++i) {
    const auto& opt = cat.options[i];
    if (!opt.prob) {
      if (i + 1 != cat.options.size()) {
        fail(ErrorCode::ProbabilityError, "only the last probability may be omitted");
      }
      last_omitted = true;
      probs.push_back(Scalar(Rational(0)));  // placeholder
      break;
    }
    Scalar p = expr_to_scalar(opt.prob, variables);
    probs.push_back(p);
    sum += p;
  }
  if (last_omitted) {
    probs.back() = Scalar(Rational(1)) - sum;
  }
  return probs;
}

}  // namespace momentforge

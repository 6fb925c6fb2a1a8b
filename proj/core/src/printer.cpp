#include "momentforge/printer.hpp"

#include <sstream>

namespace momentforge {

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec) {
  int prec = precedence(e->kind);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (e->kind) {
    case Expr::Kind::Number:
      if (e->number < 0) {
        os << "(" << rational_to_string(e->number) << ")";
      } else {
        os << rational_to_string(e->number);
      }
      break;
    case Expr::Kind::Ident:
      os << e->ident;
      break;
    case Expr::Kind::Neg:
      os << "-";
      print_expr(os, e->lhs, prec + 1);
      break;
    case Expr::Kind::Pow:
      print_expr(os, e->lhs, prec + 1);
      os << "**" << e->exponent;
      break;
    case Expr::Kind::Add:
      print_expr(os, e->lhs, prec);
      os << " + ";
      print_expr(os, e->rhs, prec + 1);
      break;
    case Expr::Kind::Sub:
      print_expr(os, e->lhs, prec);
      os << " - ";
      print_expr(os, e->rhs, prec + 1);
      break;
    case Expr::Kind::Mul:
      print_expr(os, e->lhs, prec);
      os << "*";
      print_expr(os, e->rhs, prec + 1);
      break;
    case Expr::Kind::Div:
      print_expr(os, e->lhs, prec);
      os << "/";
      print_expr(os, e->rhs, prec + 1);
      break;
  }
  if (paren) os << ")";
}

int bool_precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::Or: return 1;
    case BoolExpr::Kind::And: return 2;
    case BoolExpr::Kind::Not: return 3;
    default: return 4;
  }
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

void print_bool(std::ostream& os, const BoolPtr& b, int parent_prec) {
  int prec = bool_precedence(b->kind);
  bool paren = prec < parent_prec;
  if (paren) os << "(";
  switch (b->kind) {
    case BoolExpr::Kind::True: os << "true"; break;
    case BoolExpr::Kind::False: os << "false"; break;
    case BoolExpr::Kind::Cmp:
      print_expr(os, b->lhs, 0);
      os << " " << cmp_text(b->op) << " ";
      print_expr(os, b->rhs, 0);
      break;
    case BoolExpr::Kind::Not:
      os << "not ";
      print_bool(os, b->a, prec);
      break;
    case BoolExpr::Kind::And:
      print_bool(os, b->a, prec);
      os << " and ";
      print_bool(os, b->b, prec + 1);
      break;
    case BoolExpr::Kind::Or:
      print_bool(os, b->a, prec);
      os << " or ";
      print_bool(os, b->b, prec + 1);
      break;
  }
  if (paren) os << ")";
}

void print_rhs(std::ostream& os, const Rhs& rhs) {
  if (rhs.is_categorical()) {
    const auto& cat = rhs.categorical();
    for (std::size_t i = 0; i < cat.options.size(); ++i) {
      if (i > 0) os << " ";
      print_expr(os, cat.options[i].value, 0);
      if (cat.options[i].prob) {
        os << " {";
        print_expr(os, cat.options[i].prob, 0);
        os << "}";
      }
    }
    return;
  }
  const auto& d = rhs.dist();
  os << dist_kind_name(d.kind) << "(";
  if (d.rate_over_poly) {
    print_expr(os, d.params[0], 0);
    os << "/";
    print_expr(os, d.params[1], 3);
  } else {
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i > 0) os << ", ";
      print_expr(os, d.params[i], 0);
    }
  }
  os << ")";
}

void print_statements(std::ostream& os, const std::vector<Statement>& stmts, int indent);

void print_statement(std::ostream& os, const Statement& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (s.is_assign()) {
    const auto& a = s.assign();
    os << pad;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      if (i > 0) os << ", ";
      os << a.targets[i];
    }
    os << " = ";
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (i > 0) os << ", ";
      print_rhs(os, a.values[i]);
    }
    if (a.guard && !bool_is_true(a.guard)) {
      os << " [";
      print_bool(os, a.guard, 0);
      os << "] " << a.default_var;
    }
    os << "\n";
    return;
  }
  const auto& f = s.if_stmt();
  for (std::size_t i = 0; i < f.branches.size(); ++i) {
    os << pad << (i == 0 ? "if " : "else if ");
    print_bool(os, f.branches[i].cond, 0);
    os << ":\n";
    print_statements(os, f.branches[i].body, indent + 1);
  }
  if (!f.else_body.empty()) {
    os << pad << "else:\n";
    print_statements(os, f.else_body, indent + 1);
  }
  os << pad << "end\n";
}

void print_statements(std::ostream& os, const std::vector<Statement>& stmts, int indent) {
  for (const auto& s : stmts) print_statement(os, s, indent);
}

}  // namespace

std::string expr_to_string(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string bool_to_string(const BoolPtr& b) {
  std::ostringstream os;
  print_bool(os, b ? b : bool_true(), 0);
  return os.str();
}

std::string rhs_to_string(const Rhs& rhs) {
  std::ostringstream os;
  print_rhs(os, rhs);
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  print_statements(os, p.init, 0);
  os << "while ";
  print_bool(os, p.guard ? p.guard : bool_true(), 0);
  os << ":\n";
  print_statements(os, p.body, 1);
  os << "end\n";
  return os.str();
}

std::string pretty_print(const NormalizedProgram& p) {
  return pretty_print(p.as_program());
}

}  // namespace momentforge

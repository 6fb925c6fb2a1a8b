#include "momentforge/ast.hpp"

#include <map>

namespace momentforge {

ExprPtr expr_number(const Rational& r, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = r;
  e->loc = loc;
  return e;
}

ExprPtr expr_ident(const std::string& name, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Ident;
  e->ident = name;
  e->loc = loc;
  return e;
}

ExprPtr expr_neg(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr expr_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr expr_pow(ExprPtr base, unsigned exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number: return a->number == b->number;
    case Expr::Kind::Ident: return a->ident == b->ident;
    case Expr::Kind::Neg: return expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Pow:
      return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

void expr_collect_idents(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Ident) out.insert(e->ident);
  expr_collect_idents(e->lhs, out);
  expr_collect_idents(e->rhs, out);
}

ExprPtr expr_rename(const ExprPtr& e, const std::map<std::string, std::string>& renames) {
  if (!e) return e;
  if (e->kind == Expr::Kind::Ident) {
    auto it = renames.find(e->ident);
    if (it == renames.end()) return e;
    return expr_ident(it->second, e->loc);
  }
  ExprPtr lhs = expr_rename(e->lhs, renames);
  ExprPtr rhs = expr_rename(e->rhs, renames);
  if (lhs == e->lhs && rhs == e->rhs) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->lhs = lhs;
  copy->rhs = rhs;
  return copy;
}

ExprPtr expr_substitute_number(const ExprPtr& e, const std::string& name, const Rational& value) {
  if (!e) return e;
  if (e->kind == Expr::Kind::Ident) {
    if (e->ident == name) return expr_number(value, e->loc);
    return e;
  }
  ExprPtr lhs = expr_substitute_number(e->lhs, name, value);
  ExprPtr rhs = expr_substitute_number(e->rhs, name, value);
  if (lhs == e->lhs && rhs == e->rhs) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->lhs = lhs;
  copy->rhs = rhs;
  return copy;
}

namespace {
BoolPtr make_bool(BoolExpr b) { return std::make_shared<BoolExpr>(std::move(b)); }
}  // namespace

BoolPtr bool_true() {
  static BoolPtr t = make_bool(BoolExpr{BoolExpr::Kind::True});
  return t;
}

BoolPtr bool_false() {
  static BoolPtr f = make_bool(BoolExpr{BoolExpr::Kind::False});
  return f;
}

BoolPtr bool_cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  BoolExpr b{BoolExpr::Kind::Cmp};
  b.op = op;
  b.lhs = std::move(lhs);
  b.rhs = std::move(rhs);
  return make_bool(std::move(b));
}

BoolPtr bool_not(BoolPtr a) {
  BoolExpr b{BoolExpr::Kind::Not};
  b.a = std::move(a);
  return make_bool(std::move(b));
}

BoolPtr bool_and(BoolPtr a, BoolPtr b2) {
  BoolExpr b{BoolExpr::Kind::And};
  b.a = std::move(a);
  b.b = std::move(b2);
  return make_bool(std::move(b));
}

BoolPtr bool_or(BoolPtr a, BoolPtr b2) {
  BoolExpr b{BoolExpr::Kind::Or};
  b.a = std::move(a);
  b.b = std::move(b2);
  return make_bool(std::move(b));
}

bool bool_equal(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return true;
    case BoolExpr::Kind::Cmp:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case BoolExpr::Kind::Not:
      return bool_equal(a->a, b->a);
    default:
      return bool_equal(a->a, b->a) && bool_equal(a->b, b->b);
  }
}

bool bool_is_true(const BoolPtr& b) { return !b || b->kind == BoolExpr::Kind::True; }

void bool_collect_idents(const BoolPtr& b, std::set<std::string>& out) {
  if (!b) return;
  switch (b->kind) {
    case BoolExpr::Kind::Cmp:
      expr_collect_idents(b->lhs, out);
      expr_collect_idents(b->rhs, out);
      break;
    case BoolExpr::Kind::Not:
      bool_collect_idents(b->a, out);
      break;
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      bool_collect_idents(b->a, out);
      bool_collect_idents(b->b, out);
      break;
    default:
      break;
  }
}

BoolPtr bool_rename(const BoolPtr& b, const std::map<std::string, std::string>& renames) {
  if (!b) return b;
  switch (b->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return b;
    case BoolExpr::Kind::Cmp:
      return bool_cmp(b->op, expr_rename(b->lhs, renames), expr_rename(b->rhs, renames));
    case BoolExpr::Kind::Not:
      return bool_not(bool_rename(b->a, renames));
    case BoolExpr::Kind::And:
      return bool_and(bool_rename(b->a, renames), bool_rename(b->b, renames));
    case BoolExpr::Kind::Or:
      return bool_or(bool_rename(b->a, renames), bool_rename(b->b, renames));
  }
  return b;
}

BoolPtr bool_substitute_number(const BoolPtr& b, const std::string& name, const Rational& value) {
  if (!b) return b;
  switch (b->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return b;
    case BoolExpr::Kind::Cmp:
      return bool_cmp(b->op, expr_substitute_number(b->lhs, name, value),
                      expr_substitute_number(b->rhs, name, value));
    case BoolExpr::Kind::Not:
      return bool_not(bool_substitute_number(b->a, name, value));
    case BoolExpr::Kind::And:
      return bool_and(bool_substitute_number(b->a, name, value),
                      bool_substitute_number(b->b, name, value));
    case BoolExpr::Kind::Or:
      return bool_or(bool_substitute_number(b->a, name, value),
                     bool_substitute_number(b->b, name, value));
  }
  return b;
}

const char* dist_kind_name(DistKind k) {
  switch (k) {
    case DistKind::Bernoulli: return "Bernoulli";
    case DistKind::Normal: return "Normal";
    case DistKind::Uniform: return "Uniform";
    case DistKind::Laplace: return "Laplace";
    case DistKind::Exponential: return "Exponential";
  }
  return "?";
}

std::optional<DistKind> dist_kind_from_name(const std::string& name) {
  if (name == "Bernoulli") return DistKind::Bernoulli;
  if (name == "Normal") return DistKind::Normal;
  if (name == "Uniform") return DistKind::Uniform;
  if (name == "Laplace") return DistKind::Laplace;
  if (name == "Exponential") return DistKind::Exponential;
  return std::nullopt;
}

Rhs rhs_plain(ExprPtr value) {
  Categorical cat;
  cat.options.push_back(CatOption{std::move(value), nullptr});
  Rhs r;
  r.node = std::move(cat);
  return r;
}

namespace {

bool rhs_equal(const Rhs& a, const Rhs& b) {
  if (a.is_categorical() != b.is_categorical()) return false;
  if (a.is_categorical()) {
    const auto& ca = a.categorical();
    const auto& cb = b.categorical();
    if (ca.options.size() != cb.options.size()) return false;
    for (std::size_t i = 0; i < ca.options.size(); ++i) {
      if (!expr_equal(ca.options[i].value, cb.options[i].value)) return false;
      if ((ca.options[i].prob == nullptr) != (cb.options[i].prob == nullptr)) return false;
      if (ca.options[i].prob && !expr_equal(ca.options[i].prob, cb.options[i].prob)) return false;
    }
    return true;
  }
  const auto& da = a.dist();
  const auto& db = b.dist();
  if (da.kind != db.kind || da.rate_over_poly != db.rate_over_poly) return false;
  if (da.params.size() != db.params.size()) return false;
  for (std::size_t i = 0; i < da.params.size(); ++i) {
    if (!expr_equal(da.params[i], db.params[i])) return false;
  }
  return true;
}

bool statements_equal(const std::vector<Statement>& a, const std::vector<Statement>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!statement_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool statement_equal(const Statement& a, const Statement& b) {
  if (a.is_assign() != b.is_assign()) return false;
  if (a.is_assign()) {
    const auto& x = a.assign();
    const auto& y = b.assign();
    if (x.targets != y.targets) return false;
    if (x.values.size() != y.values.size()) return false;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      if (!rhs_equal(x.values[i], y.values[i])) return false;
    }
    if (!bool_equal(x.guard ? x.guard : bool_true(), y.guard ? y.guard : bool_true()))
      return false;
    return x.default_var == y.default_var;
  }
  const auto& x = a.if_stmt();
  const auto& y = b.if_stmt();
  if (x.branches.size() != y.branches.size()) return false;
  for (std::size_t i = 0; i < x.branches.size(); ++i) {
    if (!bool_equal(x.branches[i].cond, y.branches[i].cond)) return false;
    if (!statements_equal(x.branches[i].body, y.branches[i].body)) return false;
  }
  return statements_equal(x.else_body, y.else_body);
}

void collect_assigned_vars(const std::vector<Statement>& stmts, std::set<std::string>& out) {
  for (const auto& s : stmts) {
    if (s.is_assign()) {
      for (const auto& t : s.assign().targets) out.insert(t);
    } else {
      for (const auto& br : s.if_stmt().branches) collect_assigned_vars(br.body, out);
      collect_assigned_vars(s.if_stmt().else_body, out);
    }
  }
}

namespace {

void collect_idents_stmt(const std::vector<Statement>& stmts, std::set<std::string>& out) {
  for (const auto& s : stmts) {
    if (s.is_assign()) {
      const auto& a = s.assign();
      for (const auto& t : a.targets) out.insert(t);
      for (const auto& rhs : a.values) {
        if (rhs.is_categorical()) {
          for (const auto& opt : rhs.categorical().options) {
            expr_collect_idents(opt.value, out);
            if (opt.prob) expr_collect_idents(opt.prob, out);
          }
        } else {
          for (const auto& p : rhs.dist().params) expr_collect_idents(p, out);
        }
      }
      if (a.guard) bool_collect_idents(a.guard, out);
      if (!a.default_var.empty()) out.insert(a.default_var);
    } else {
      for (const auto& br : s.if_stmt().branches) {
        bool_collect_idents(br.cond, out);
        collect_idents_stmt(br.body, out);
      }
      collect_idents_stmt(s.if_stmt().else_body, out);
    }
  }
}

}  // namespace

void Program::reclassify() {
  std::set<std::string> assigned;
  collect_assigned_vars(init, assigned);
  collect_assigned_vars(body, assigned);
  std::set<std::string> all;
  collect_idents_stmt(init, all);
  collect_idents_stmt(body, all);
  bool_collect_idents(guard, all);
  variables = assigned;
  symbols.clear();
  for (const auto& name : all) {
    if (!assigned.count(name)) symbols.insert(name);
  }
}

bool Program::structurally_equal(const Program& o) const {
  if (!bool_equal(guard ? guard : bool_true(), o.guard ? o.guard : bool_true())) return false;
  if (init.size() != o.init.size() || body.size() != o.body.size()) return false;
  for (std::size_t i = 0; i < init.size(); ++i) {
    if (!statement_equal(init[i], o.init[i])) return false;
  }
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (!statement_equal(body[i], o.body[i])) return false;
  }
  return true;
}

void collect_reads(const Statement& s, std::set<std::string>& reads) {
  if (s.is_assign()) {
    const auto& a = s.assign();
    for (const auto& rhs : a.values) {
      if (rhs.is_categorical()) {
        for (const auto& opt : rhs.categorical().options) {
          expr_collect_idents(opt.value, reads);
          if (opt.prob) expr_collect_idents(opt.prob, reads);
        }
      } else {
        for (const auto& p : rhs.dist().params) expr_collect_idents(p, reads);
      }
    }
    if (a.guard && !bool_is_true(a.guard)) {
      bool_collect_idents(a.guard, reads);
      if (!a.default_var.empty()) reads.insert(a.default_var);
    }
  } else {
    for (const auto& br : s.if_stmt().branches) {
      bool_collect_idents(br.cond, reads);
      for (const auto& inner : br.body) collect_reads(inner, reads);
    }
    for (const auto& inner : s.if_stmt().else_body) collect_reads(inner, reads);
  }
}

namespace {

// Sequential scan; only top-level unconditional assignments mask later reads.
void scan_pre_reads(const std::vector<Statement>& stmts, const std::set<std::string>& variables,
                    std::set<std::string>& assigned, std::set<std::string>& pre_read) {
  for (const auto& s : stmts) {
    std::set<std::string> reads;
    collect_reads(s, reads);
    for (const auto& r : reads) {
      if (variables.count(r) && !assigned.count(r)) pre_read.insert(r);
    }
    if (s.is_assign()) {
      const auto& a = s.assign();
      bool unconditional = !a.guard || bool_is_true(a.guard);
      if (unconditional) {
        for (const auto& t : a.targets) assigned.insert(t);
      }
    }
  }
}

}  // namespace

std::set<std::string> pre_state_reads(const Program& p) {
  std::set<std::string> assigned, pre_read;
  scan_pre_reads(p.init, p.variables, assigned, pre_read);
  // Guard reads happen before every iteration.
  std::set<std::string> guard_reads;
  bool_collect_idents(p.guard, guard_reads);
  for (const auto& r : guard_reads) {
    if (p.variables.count(r) && !assigned.count(r)) pre_read.insert(r);
  }
  scan_pre_reads(p.body, p.variables, assigned, pre_read);
  return pre_read;
}

Program NormalizedProgram::as_program() const {
  Program p;
  p.guard = bool_true();
  auto convert = [](const GuardedAssign& g) {
    AssignStmt a;
    a.targets = {g.target};
    a.values = {g.rhs};
    a.guard = g.guard;
    a.default_var = g.default_var;
    Statement s;
    s.node = std::move(a);
    return s;
  };
  for (const auto& g : init) p.init.push_back(convert(g));
  for (const auto& g : body) p.body.push_back(convert(g));
  p.reclassify();
  return p;
}

}  // namespace momentforge

#include "momentforge/normalizer.hpp"

#include <algorithm>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"

namespace momentforge {

namespace {

// ---------------------------------------------------------------------------
// Helpers over statement trees
// ---------------------------------------------------------------------------

std::vector<Statement>* resolve_parent(Program& p, const Site& site, unsigned* out_index) {
  std::vector<Statement>* list = site.in_init ? &p.init : &p.body;
  for (std::size_t i = 0; i + 1 < site.steps.size(); ++i) {
    const auto& step = site.steps[i];
    if (step.stmt >= list->size()) fail(ErrorCode::NotApplicable, "site out of range");
    Statement& s = (*list)[step.stmt];
    if (!s.is_if()) fail(ErrorCode::NotApplicable, "site path descends into a non-if statement");
    IfStmt& f = s.if_stmt();
    if (step.branch == Site::kElseBranch) {
      list = &f.else_body;
    } else if (step.branch >= 0 && static_cast<std::size_t>(step.branch) < f.branches.size()) {
      list = &f.branches[static_cast<std::size_t>(step.branch)].body;
    } else {
      fail(ErrorCode::NotApplicable, "site branch out of range");
    }
  }
  if (site.steps.empty()) fail(ErrorCode::NotApplicable, "empty site");
  if (site.steps.back().stmt >= list->size()) fail(ErrorCode::NotApplicable, "site out of range");
  *out_index = site.steps.back().stmt;
  return list;
}

void collect_all_idents(const std::vector<Statement>& stmts, std::set<std::string>& out) {
  for (const auto& s : stmts) {
    if (s.is_assign()) {
      const auto& a = s.assign();
      for (const auto& t : a.targets) out.insert(t);
      if (!a.default_var.empty()) out.insert(a.default_var);
      if (a.guard) bool_collect_idents(a.guard, out);
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
    } else {
      for (const auto& br : s.if_stmt().branches) {
        bool_collect_idents(br.cond, out);
        collect_all_idents(br.body, out);
      }
      collect_all_idents(s.if_stmt().else_body, out);
    }
  }
}

class FreshNames {
 public:
  explicit FreshNames(const Program& p) {
    collect_all_idents(p.init, taken_);
    collect_all_idents(p.body, taken_);
    bool_collect_idents(p.guard, taken_);
  }

  std::string next() {
    while (true) {
      std::string name = "_t" + std::to_string(counter_++);
      if (taken_.insert(name).second) return name;
    }
  }

 private:
  std::set<std::string> taken_;
  unsigned counter_ = 1;
};

void rename_in_rhs(Rhs& rhs, const std::map<std::string, std::string>& renames) {
  if (rhs.is_categorical()) {
    for (auto& opt : rhs.categorical().options) {
      opt.value = expr_rename(opt.value, renames);
      if (opt.prob) opt.prob = expr_rename(opt.prob, renames);
    }
  } else {
    for (auto& p : rhs.dist().params) p = expr_rename(p, renames);
  }
}

void rename_reads_in_statement(Statement& s, const std::map<std::string, std::string>& renames) {
  if (s.is_assign()) {
    auto& a = s.assign();
    for (auto& rhs : a.values) rename_in_rhs(rhs, renames);
    if (a.guard) a.guard = bool_rename(a.guard, renames);
    if (!a.default_var.empty()) {
      auto it = renames.find(a.default_var);
      if (it != renames.end()) a.default_var = it->second;
    }
  } else {
    for (auto& br : s.if_stmt().branches) {
      br.cond = bool_rename(br.cond, renames);
      for (auto& inner : br.body) rename_reads_in_statement(inner, renames);
    }
    for (auto& inner : s.if_stmt().else_body) rename_reads_in_statement(inner, renames);
  }
}

Statement make_plain_assign(const std::string& target, ExprPtr value) {
  AssignStmt a;
  a.targets = {target};
  a.values = {rhs_plain(std::move(value))};
  Statement s;
  s.node = std::move(a);
  return s;
}

Statement make_assign(const std::string& target, Rhs rhs) {
  AssignStmt a;
  a.targets = {target};
  a.values = {std::move(rhs)};
  Statement s;
  s.node = std::move(a);
  return s;
}

// ---------------------------------------------------------------------------
// Termination measure
// ---------------------------------------------------------------------------

unsigned long long depth_weight(unsigned depth) {
  // Sum of 4^j for j < depth: strictly dominates the cost of hoisting one
  // assignment out of one nesting level plus the introduced copy statement.
  unsigned long long w = 0, p = 1;
  for (unsigned j = 0; j < depth && j < 30; ++j) {
    w += p;
    p *= 4;
  }
  return w;
}

bool dist_is_normal_form(const DistCall& d) {
  auto is_zero = [](const ExprPtr& e) {
    auto v = expr_numeric_value(e);
    return v && *v == 0;
  };
  auto is_one = [](const ExprPtr& e) {
    auto v = expr_numeric_value(e);
    return v && *v == 1;
  };
  switch (d.kind) {
    case DistKind::Bernoulli: return true;
    case DistKind::Normal: return is_zero(d.params[0]);
    case DistKind::Uniform: return is_zero(d.params[0]) && is_one(d.params[1]);
    case DistKind::Laplace: return is_zero(d.params[0]);
    case DistKind::Exponential: return !d.rate_over_poly;
  }
  return true;
}

struct MeasureScan {
  unsigned long long sim = 0, dist = 0, elses = 0, ifw = 0;
  std::map<std::string, unsigned> assign_counts;

  void scan(const std::vector<Statement>& stmts, unsigned depth) {
    for (const auto& s : stmts) {
      if (s.is_assign()) {
        const auto& a = s.assign();
        if (a.targets.size() >= 2) ++sim;
        for (const auto& t : a.targets) ++assign_counts[t];
        for (const auto& rhs : a.values) {
          if (rhs.is_dist() && !dist_is_normal_form(rhs.dist())) ++dist;
        }
        ifw += depth_weight(depth);
      } else {
        const auto& f = s.if_stmt();
        if (!f.else_body.empty()) ++elses;
        for (const auto& br : f.branches) scan(br.body, depth + 1);
        scan(f.else_body, depth + 1);
      }
    }
  }

  unsigned long long multi() const {
    unsigned long long m = 0;
    for (const auto& [v, c] : assign_counts) {
      if (c >= 2) ++m;
    }
    return m;
  }
};

}  // namespace

Measure program_measure(const Program& p) {
  MeasureScan body_scan, init_scan;
  body_scan.scan(p.body, 0);
  init_scan.scan(p.init, 0);
  return Measure{body_scan.sim + init_scan.sim,
                 body_scan.dist + init_scan.dist,
                 body_scan.elses + init_scan.elses,
                 body_scan.ifw + init_scan.ifw,
                 body_scan.multi(),
                 init_scan.multi()};
}

// ---------------------------------------------------------------------------
// else-if desugaring and cleanup
// ---------------------------------------------------------------------------

namespace {

void desugar_statements(std::vector<Statement>& stmts) {
  std::vector<Statement> out;
  for (auto& s : stmts) {
    if (!s.is_if()) {
      out.push_back(std::move(s));
      continue;
    }
    IfStmt f = std::move(s.if_stmt());
    for (auto& br : f.branches) desugar_statements(br.body);
    desugar_statements(f.else_body);
    // Fold else-if chains into nested if/else.
    while (f.branches.size() > 1) {
      IfStmt inner;
      inner.branches.assign(f.branches.begin() + 1, f.branches.end());
      inner.else_body = std::move(f.else_body);
      f.branches.resize(1);
      Statement is;
      is.node = std::move(inner);
      f.else_body.clear();
      f.else_body.push_back(std::move(is));
    }
    // Degenerate ifs with no content disappear.
    bool empty = f.else_body.empty();
    for (const auto& br : f.branches) {
      if (!br.body.empty()) empty = false;
    }
    if (empty) continue;
    // An empty then-branch with an else becomes a negated if.
    if (f.branches.size() == 1 && f.branches[0].body.empty() && !f.else_body.empty()) {
      IfStmt inv;
      IfBranch nb;
      nb.cond = bool_not(f.branches[0].cond);
      nb.body = std::move(f.else_body);
      inv.branches.push_back(std::move(nb));
      Statement is;
      is.node = std::move(inv);
      out.push_back(std::move(is));
      continue;
    }
    Statement is;
    is.node = std::move(f);
    out.push_back(std::move(is));
  }
  stmts = std::move(out);
}

}  // namespace

Program desugar_else_if(const Program& p) {
  Program q = p;
  desugar_statements(q.init);
  desugar_statements(q.body);
  q.reclassify();
  return q;
}

// ---------------------------------------------------------------------------
// fold_init_constants
// ---------------------------------------------------------------------------

namespace {

ExprPtr expr_substitute_expr(const ExprPtr& e, const std::string& name, const ExprPtr& value) {
  if (!e) return e;
  if (e->kind == Expr::Kind::Ident) {
    return e->ident == name ? value : e;
  }
  ExprPtr lhs = expr_substitute_expr(e->lhs, name, value);
  ExprPtr rhs = expr_substitute_expr(e->rhs, name, value);
  if (lhs == e->lhs && rhs == e->rhs) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->lhs = lhs;
  copy->rhs = rhs;
  return copy;
}

BoolPtr bool_substitute_expr(const BoolPtr& b, const std::string& name, const ExprPtr& value) {
  if (!b) return b;
  switch (b->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return b;
    case BoolExpr::Kind::Cmp:
      return bool_cmp(b->op, expr_substitute_expr(b->lhs, name, value),
                      expr_substitute_expr(b->rhs, name, value));
    case BoolExpr::Kind::Not:
      return bool_not(bool_substitute_expr(b->a, name, value));
    case BoolExpr::Kind::And:
      return bool_and(bool_substitute_expr(b->a, name, value),
                      bool_substitute_expr(b->b, name, value));
    case BoolExpr::Kind::Or:
      return bool_or(bool_substitute_expr(b->a, name, value),
                     bool_substitute_expr(b->b, name, value));
  }
  return b;
}

void substitute_in_statements(std::vector<Statement>& stmts, const std::string& name,
                              const ExprPtr& value, const Statement* skip) {
  for (auto& s : stmts) {
    if (&s == skip) continue;
    if (s.is_assign()) {
      auto& a = s.assign();
      for (auto& rhs : a.values) {
        if (rhs.is_categorical()) {
          for (auto& opt : rhs.categorical().options) {
            opt.value = expr_substitute_expr(opt.value, name, value);
            if (opt.prob) opt.prob = expr_substitute_expr(opt.prob, name, value);
          }
        } else {
          for (auto& p : rhs.dist().params) p = expr_substitute_expr(p, name, value);
        }
      }
      if (a.guard) a.guard = bool_substitute_expr(a.guard, name, value);
    } else {
      for (auto& br : s.if_stmt().branches) {
        br.cond = bool_substitute_expr(br.cond, name, value);
        substitute_in_statements(br.body, name, value, skip);
      }
      substitute_in_statements(s.if_stmt().else_body, name, value, skip);
    }
  }
}

void count_assignments(const std::vector<Statement>& stmts,
                       std::map<std::string, unsigned>& counts) {
  for (const auto& s : stmts) {
    if (s.is_assign()) {
      for (const auto& t : s.assign().targets) ++counts[t];
    } else {
      for (const auto& br : s.if_stmt().branches) count_assignments(br.body, counts);
      count_assignments(s.if_stmt().else_body, counts);
    }
  }
}

}  // namespace

Program fold_init_constants(const Program& p) {
  Program q = p;
  std::map<std::string, unsigned> counts;
  count_assignments(q.init, counts);
  count_assignments(q.body, counts);

  std::set<std::string> folded;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& s : q.init) {
      if (!s.is_assign()) continue;
      auto& a = s.assign();
      if (a.targets.size() != 1 || a.guard) continue;
      const std::string& x = a.targets[0];
      if (folded.count(x) || counts[x] != 1) continue;
      if (!a.values[0].is_categorical()) continue;
      const auto& cat = a.values[0].categorical();
      if (cat.options.size() != 1) continue;
      const ExprPtr& value = cat.options[0].value;
      if (!expr_is_const(value, q.variables)) continue;
      substitute_in_statements(q.init, x, value, &s);
      substitute_in_statements(q.body, x, value, nullptr);
      q.guard = bool_substitute_expr(q.guard, x, value);
      folded.insert(x);
      changed = true;
    }
  }
  q.reclassify();
  return q;
}

Program encode_guard(const Program& p, BoolPtr* recorded_guard) {
  if (bool_is_true(p.guard)) {
    if (recorded_guard) *recorded_guard = nullptr;
    return p;
  }
  Program q;
  q.init = p.init;
  q.guard = bool_true();
  IfStmt wrap;
  IfBranch br;
  br.cond = p.guard;
  br.body = p.body;
  wrap.branches.push_back(std::move(br));
  Statement s;
  s.node = std::move(wrap);
  q.body.push_back(std::move(s));
  q.reclassify();
  if (recorded_guard) *recorded_guard = p.guard;
  return q;
}

// ---------------------------------------------------------------------------
// The five transformations
// ---------------------------------------------------------------------------

namespace {

bool simultaneous_applicable(const Statement& s) {
  return s.is_assign() && s.assign().targets.size() >= 2;
}

std::vector<Statement> simultaneous_rewrite(const AssignStmt& a, FreshNames& fresh) {
  std::vector<Statement> out;
  std::vector<std::string> temps;
  temps.reserve(a.targets.size());
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    std::string t = fresh.next();
    temps.push_back(t);
    out.push_back(make_assign(t, a.values[i]));
  }
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    out.push_back(make_plain_assign(a.targets[i], expr_ident(temps[i])));
  }
  return out;
}

bool distribution_applicable(const Statement& s) {
  if (!s.is_assign()) return false;
  const auto& a = s.assign();
  if (a.targets.size() != 1) return false;
  return a.values[0].is_dist() && !dist_is_normal_form(a.values[0].dist());
}

std::vector<Statement> distribution_rewrite(const AssignStmt& a, FreshNames& fresh) {
  const DistCall& d = a.values[0].dist();
  std::string t = fresh.next();
  DistCall normalized;
  normalized.kind = d.kind;
  normalized.draw_id = d.draw_id;
  ExprPtr combined;
  ExprPtr tvar = expr_ident(t);
  switch (d.kind) {
    case DistKind::Normal:
      normalized.params = {expr_number(Rational(0)), d.params[1]};
      combined = expr_binary(Expr::Kind::Add, d.params[0], tvar);
      break;
    case DistKind::Laplace:
      normalized.params = {expr_number(Rational(0)), d.params[1]};
      combined = expr_binary(Expr::Kind::Add, d.params[0], tvar);
      break;
    case DistKind::Uniform:
      normalized.params = {expr_number(Rational(0)), expr_number(Rational(1))};
      combined = expr_binary(
          Expr::Kind::Add, d.params[0],
          expr_binary(Expr::Kind::Mul,
                      expr_binary(Expr::Kind::Sub, d.params[1], d.params[0]), tvar));
      break;
    case DistKind::Exponential:
      normalized.params = {d.params[0]};
      normalized.rate_over_poly = false;
      combined = expr_binary(Expr::Kind::Mul, d.params[1], tvar);
      break;
    case DistKind::Bernoulli:
      fail(ErrorCode::NotApplicable, "Bernoulli has no distribution rewrite");
  }
  Rhs dist_rhs;
  dist_rhs.node = std::move(normalized);

  std::vector<Statement> out;
  out.push_back(make_assign(t, std::move(dist_rhs)));
  AssignStmt repl;
  repl.targets = a.targets;
  repl.values = {rhs_plain(combined)};
  repl.guard = a.guard;
  repl.default_var = a.default_var;
  Statement rs;
  rs.node = std::move(repl);
  out.push_back(std::move(rs));
  return out;
}

bool else_applicable(const Statement& s) {
  return s.is_if() && s.if_stmt().branches.size() == 1 && !s.if_stmt().else_body.empty();
}

std::vector<Statement> else_rewrite(const IfStmt& f, FreshNames& fresh) {
  const BoolPtr& cond = f.branches[0].cond;
  std::set<std::string> cond_vars;
  bool_collect_idents(cond, cond_vars);
  std::set<std::string> assigned;
  collect_assigned_vars(f.branches[0].body, assigned);

  std::vector<Statement> out;
  std::map<std::string, std::string> renames;
  for (const auto& v : cond_vars) {
    if (!assigned.count(v)) continue;
    std::string t = fresh.next();
    renames[v] = t;
    out.push_back(make_plain_assign(t, expr_ident(v)));
  }
  BoolPtr cond2 = renames.empty() ? cond : bool_rename(cond, renames);

  IfStmt pos;
  pos.branches.push_back(IfBranch{cond, f.branches[0].body});
  Statement ps;
  ps.node = std::move(pos);
  out.push_back(std::move(ps));

  IfStmt neg;
  neg.branches.push_back(IfBranch{bool_not(cond2), f.else_body});
  Statement ns;
  ns.node = std::move(neg);
  out.push_back(std::move(ns));
  return out;
}

bool if_applicable(const Statement& s) {
  if (!s.is_if()) return false;
  const auto& f = s.if_stmt();
  if (f.branches.size() != 1 || !f.else_body.empty()) return false;
  if (f.branches[0].body.empty()) return false;
  const Statement& first = f.branches[0].body[0];
  if (!first.is_assign()) return false;
  const auto& a = first.assign();
  if (a.targets.size() != 1) return false;
  if (!a.default_var.empty() && a.default_var != a.targets[0]) return false;
  return true;
}

std::vector<Statement> if_rewrite(const IfStmt& f, FreshNames& fresh) {
  const BoolPtr& c1 = f.branches[0].cond;
  const AssignStmt& inner = f.branches[0].body[0].assign();
  const std::string& x = inner.targets[0];

  std::set<std::string> cond_vars;
  bool_collect_idents(c1, cond_vars);

  std::vector<Statement> out;
  BoolPtr rest_cond = c1;
  if (cond_vars.count(x)) {
    std::string t = fresh.next();
    out.push_back(make_plain_assign(t, expr_ident(x)));
    rest_cond = bool_rename(c1, {{x, t}});
  }

  AssignStmt hoisted;
  hoisted.targets = {x};
  hoisted.values = inner.values;
  hoisted.guard = (inner.guard && !bool_is_true(inner.guard)) ? bool_and(c1, inner.guard) : c1;
  hoisted.default_var = x;
  Statement hs;
  hs.node = std::move(hoisted);
  out.push_back(std::move(hs));

  if (f.branches[0].body.size() > 1) {
    IfStmt rest;
    IfBranch br;
    br.cond = rest_cond;
    br.body.assign(f.branches[0].body.begin() + 1, f.branches[0].body.end());
    rest.branches.push_back(std::move(br));
    Statement rs;
    rs.node = std::move(rest);
    out.push_back(std::move(rs));
  }
  return out;
}

// Multi sites are flat statement lists; the site points at the *second*
// assignment of some variable (the first statement that makes a variable
// multiply-assigned).
std::optional<std::string> multi_variable_at(const std::vector<Statement>& stmts, unsigned idx) {
  if (idx >= stmts.size() || !stmts[idx].is_assign()) return std::nullopt;
  const auto& a = stmts[idx].assign();
  if (a.targets.size() != 1) return std::nullopt;
  const std::string& x = a.targets[0];
  for (unsigned i = 0; i < idx; ++i) {
    if (stmts[i].is_assign() && stmts[i].assign().targets.size() == 1 &&
        stmts[i].assign().targets[0] == x) {
      return x;
    }
  }
  return std::nullopt;
}

void multi_rewrite(std::vector<Statement>& stmts, const std::string& x, FreshNames& fresh) {
  std::vector<unsigned> positions;
  for (unsigned i = 0; i < stmts.size(); ++i) {
    if (stmts[i].is_assign() && stmts[i].assign().targets.size() == 1 &&
        stmts[i].assign().targets[0] == x) {
      positions.push_back(i);
    }
  }
  const std::size_t l = positions.size();
  if (l < 2) fail(ErrorCode::NotApplicable, "variable is not multiply assigned");

  std::vector<std::string> names;  // value of x after the k-th assignment
  for (std::size_t k = 0; k + 1 < l; ++k) names.push_back(fresh.next());
  names.push_back(x);  // the last assignment keeps the original name

  for (std::size_t k = 0; k < l; ++k) {
    AssignStmt& a = stmts[positions[k]].assign();
    a.targets[0] = names[k];
    if (k >= 1) {
      // Reads inside the k-th assignment refer to the (k-1)-th value.
      std::map<std::string, std::string> rename{{x, names[k - 1]}};
      for (auto& rhs : a.values) rename_in_rhs(rhs, rename);
      if (a.guard) a.guard = bool_rename(a.guard, rename);
      if (a.default_var == x) a.default_var = names[k - 1];
    }
    // Statements between assignment k and k+1 read the k-th value.
    unsigned hi = (k + 1 < l) ? positions[k + 1] : static_cast<unsigned>(stmts.size());
    if (names[k] != x) {
      std::map<std::string, std::string> rename{{x, names[k]}};
      for (unsigned i = positions[k] + 1; i < hi; ++i) {
        rename_reads_in_statement(stmts[i], rename);
      }
    }
  }
}

std::optional<Site> find_site_impl(TransformKind kind, const std::vector<Statement>& stmts,
                                   bool in_init) {
  // Depth-first, statement order; for the if transformation the outermost
  // applicable statement wins because parents are visited before children.
  std::vector<Site::Step> path;
  std::optional<Site> found;

  std::function<bool(const std::vector<Statement>&)> walk =
      [&](const std::vector<Statement>& list) -> bool {
    for (unsigned i = 0; i < list.size(); ++i) {
      const Statement& s = list[i];
      bool hit = false;
      switch (kind) {
        case TransformKind::Simultaneous: hit = simultaneous_applicable(s); break;
        case TransformKind::Distribution: hit = distribution_applicable(s); break;
        case TransformKind::Else: hit = else_applicable(s); break;
        case TransformKind::If: hit = if_applicable(s); break;
        case TransformKind::Multi: hit = multi_variable_at(list, i).has_value(); break;
      }
      if (hit) {
        Site site;
        site.in_init = in_init;
        site.steps = path;
        site.steps.push_back({i, Site::kNoBranch});
        found = site;
        return true;
      }
      if (s.is_if()) {
        const auto& f = s.if_stmt();
        for (unsigned b = 0; b < f.branches.size(); ++b) {
          path.push_back({i, static_cast<int>(b)});
          if (walk(f.branches[b].body)) return true;
          path.pop_back();
        }
        path.push_back({i, Site::kElseBranch});
        if (walk(f.else_body)) return true;
        path.pop_back();
      }
    }
    return false;
  };

  walk(stmts);
  return found;
}

}  // namespace

std::optional<Site> find_site(TransformKind kind, const Program& p) {
  if (auto s = find_site_impl(kind, p.init, true)) return s;
  return find_site_impl(kind, p.body, false);
}

Program apply_transformation(TransformKind kind, const Program& p, const Site& site) {
  Program q = p;
  unsigned idx = 0;
  std::vector<Statement>* list = resolve_parent(q, site, &idx);
  FreshNames fresh(q);

  const Statement& target = (*list)[idx];
  std::vector<Statement> replacement;
  switch (kind) {
    case TransformKind::Simultaneous:
      if (!simultaneous_applicable(target)) {
        fail(ErrorCode::NotApplicable, "not a simultaneous assignment");
      }
      replacement = simultaneous_rewrite(target.assign(), fresh);
      break;
    case TransformKind::Distribution:
      if (!distribution_applicable(target)) {
        fail(ErrorCode::NotApplicable,
             "not a distribution call requiring parameter normalization");
      }
      replacement = distribution_rewrite(target.assign(), fresh);
      break;
    case TransformKind::Else:
      if (!else_applicable(target)) fail(ErrorCode::NotApplicable, "not an if-else statement");
      replacement = else_rewrite(target.if_stmt(), fresh);
      break;
    case TransformKind::If:
      if (!if_applicable(target)) {
        fail(ErrorCode::NotApplicable, "not an if statement starting with an assignment");
      }
      replacement = if_rewrite(target.if_stmt(), fresh);
      break;
    case TransformKind::Multi: {
      auto x = multi_variable_at(*list, idx);
      if (!x) fail(ErrorCode::NotApplicable, "not a repeated assignment site");
      multi_rewrite(*list, *x, fresh);
      q.reclassify();
      return q;
    }
  }
  list->erase(list->begin() + idx);
  list->insert(list->begin() + idx, replacement.begin(), replacement.end());
  q.reclassify();
  return q;
}

NormalizedProgram normalize(const Program& p) {
  Program work = desugar_else_if(p);
  Measure measure = program_measure(work);

  static constexpr TransformKind kOrder[] = {
      TransformKind::Simultaneous, TransformKind::Distribution, TransformKind::Else,
      TransformKind::If, TransformKind::Multi};

  while (true) {
    bool applied = false;
    for (TransformKind kind : kOrder) {
      auto site = find_site(kind, work);
      if (!site) continue;
      work = apply_transformation(kind, work, *site);
      Measure next = program_measure(work);
      if (!(next < measure)) {
        fail(ErrorCode::Internal, "termination measure failed to decrease");
      }
      measure = next;
      applied = true;
      break;
    }
    if (!applied) break;
  }

  NormalizedProgram out;
  out.original_vars = p.variables;
  out.source_guard = nullptr;

  auto convert = [&](const std::vector<Statement>& stmts, std::vector<GuardedAssign>& dst,
                     bool is_body) {
    std::set<std::string> seen;
    for (const auto& s : stmts) {
      if (!s.is_assign()) {
        fail(ErrorCode::Internal, "if statement survived normalization");
      }
      const auto& a = s.assign();
      if (a.targets.size() != 1) {
        fail(ErrorCode::Internal, "simultaneous assignment survived normalization");
      }
      GuardedAssign g;
      g.target = a.targets[0];
      g.rhs = a.values[0];
      g.guard = a.guard ? a.guard : bool_true();
      g.default_var = a.default_var.empty() ? a.targets[0] : a.default_var;
      if (is_body && !seen.insert(g.target).second) {
        fail(ErrorCode::Internal, "variable assigned twice after normalization: " + g.target);
      }
      dst.push_back(std::move(g));
    }
  };
  convert(work.init, out.init, false);
  convert(work.body, out.body, true);

  Program view = out.as_program();
  out.variables = view.variables;
  out.symbols = view.symbols;

  // Every distribution parameter must now be a constant expression.
  for (const auto* part : {&out.init, &out.body}) {
    for (const auto& g : *part) {
      if (!g.rhs.is_dist()) continue;
      for (const auto& param : g.rhs.dist().params) {
        if (!expr_is_const(param, out.variables)) {
          fail(ErrorCode::UnsupportedDistribution,
               std::string(dist_kind_name(g.rhs.dist().kind)) +
                   " parameter depends on a program variable after normalization "
                   "(assignment of '" +
                   g.target + "')");
        }
      }
    }
  }
  return out;
}

}  // namespace momentforge

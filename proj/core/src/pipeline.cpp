#include "momentforge/pipeline.hpp"

#include <algorithm>
#include <functional>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/power_reduction.hpp"
#include "momentforge/printer.hpp"

namespace momentforge {

namespace {

std::string slugify_condition(const std::string& text) {
  std::string out = "p_";
  auto append = [&](const std::string& s) {
    if (!out.empty() && out.back() != '_' && !s.empty()) out += s;
    else out += s;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      out.push_back(c);
    } else if (two('=', '=')) {
      append("_eq_");
      ++i;
    } else if (two('!', '=')) {
      append("_ne_");
      ++i;
    } else if (two('<', '=')) {
      append("_le_");
      ++i;
    } else if (two('>', '=')) {
      append("_ge_");
      ++i;
    } else if (c == '<') {
      append("_lt_");
    } else if (c == '>') {
      append("_gt_");
    } else if (c == '/') {
      append("_over_");
    } else if (c == '+') {
      append("_plus_");
    } else if (c == '-') {
      append("_minus_");
    } else if (c == '*') {
      append("_times_");
    }
    // everything else (spaces, parens) is dropped
  }
  // collapse double underscores
  std::string collapsed;
  for (char c : out) {
    if (c == '_' && !collapsed.empty() && collapsed.back() == '_') continue;
    collapsed.push_back(c);
  }
  if (!collapsed.empty() && collapsed.back() == '_') collapsed.pop_back();
  return collapsed;
}

// Conjunction list of a condition.
void flatten_conjuncts(const BoolPtr& b, std::vector<BoolPtr>& out) {
  if (b->kind == BoolExpr::Kind::And) {
    flatten_conjuncts(b->a, out);
    flatten_conjuncts(b->b, out);
  } else {
    out.push_back(b);
  }
}

struct SiteRef {
  std::vector<Statement>* list = nullptr;
  std::size_t index = 0;
  std::size_t branch = 0;
};

// First if-branch whose condition mentions a non-finite variable.
bool find_infinite_site(Program& p, const TypeEnv& types, SiteRef* out) {
  std::function<bool(std::vector<Statement>&)> walk = [&](std::vector<Statement>& stmts) {
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      if (!stmts[i].is_if()) continue;
      auto& f = stmts[i].if_stmt();
      for (std::size_t b = 0; b < f.branches.size(); ++b) {
        std::set<std::string> ids;
        bool_collect_idents(f.branches[b].cond, ids);
        for (const auto& id : ids) {
          if (!p.variables.count(id)) continue;
          auto it = types.find(id);
          if (it == types.end() || it->second.infinite) {
            out->list = &stmts;
            out->index = i;
            out->branch = b;
            return true;
          }
        }
      }
      for (auto& br : f.branches) {
        if (walk(br.body)) return true;
      }
      if (walk(f.else_body)) return true;
    }
    return false;
  };
  return walk(p.body);
}

// Variables reached by within-iteration data flow from `sources`, excluding
// flow through the condition being rewritten.
std::set<std::string> forward_flow(const Program& p, const std::set<std::string>& sources,
                                   const BoolPtr& excluded_cond) {
  std::set<std::string> flow = sources;
  bool changed = true;
  while (changed) {
    changed = false;
    std::function<void(const std::vector<Statement>&, std::set<std::string>)> walk =
        [&](const std::vector<Statement>& stmts, std::set<std::string> cond_vars) {
          for (const auto& s : stmts) {
            if (s.is_if()) {
              for (const auto& br : s.if_stmt().branches) {
                std::set<std::string> inner = cond_vars;
                if (br.cond != excluded_cond) bool_collect_idents(br.cond, inner);
                walk(br.body, inner);
              }
              std::set<std::string> inner = cond_vars;
              for (const auto& br : s.if_stmt().branches) {
                if (br.cond != excluded_cond) bool_collect_idents(br.cond, inner);
              }
              walk(s.if_stmt().else_body, inner);
              continue;
            }
            const auto& a = s.assign();
            std::set<std::string> reads = cond_vars;
            if (a.guard) bool_collect_idents(a.guard, reads);
            for (const auto& rhs : a.values) {
              if (rhs.is_categorical()) {
                for (const auto& opt : rhs.categorical().options) {
                  expr_collect_idents(opt.value, reads);
                }
              } else {
                for (const auto& prm : rhs.dist().params) expr_collect_idents(prm, reads);
              }
            }
            bool tainted = false;
            for (const auto& r : reads) {
              if (flow.count(r)) tainted = true;
            }
            if (tainted) {
              for (const auto& t : a.targets) {
                if (flow.insert(t).second) changed = true;
              }
            }
          }
        };
    walk(p.body, {});
  }
  return flow;
}

void collect_branch_conditions(const std::vector<Statement>& stmts,
                               std::set<std::string>& vars) {
  for (const auto& s : stmts) {
    if (s.is_if()) {
      for (const auto& br : s.if_stmt().branches) {
        bool_collect_idents(br.cond, vars);
        collect_branch_conditions(br.body, vars);
      }
      collect_branch_conditions(s.if_stmt().else_body, vars);
    } else if (s.assign().guard) {
      bool_collect_idents(s.assign().guard, vars);
    }
  }
}

void collect_assignment_reads(const std::vector<Statement>& stmts,
                              std::set<std::string>& vars) {
  for (const auto& s : stmts) {
    if (s.is_if()) {
      for (const auto& br : s.if_stmt().branches) collect_assignment_reads(br.body, vars);
      collect_assignment_reads(s.if_stmt().else_body, vars);
    } else {
      for (const auto& rhs : s.assign().values) {
        if (rhs.is_categorical()) {
          for (const auto& opt : rhs.categorical().options) {
            expr_collect_idents(opt.value, vars);
          }
        } else {
          for (const auto& prm : rhs.dist().params) expr_collect_idents(prm, vars);
        }
      }
      if (!s.assign().default_var.empty()) vars.insert(s.assign().default_var);
    }
  }
}

bool assigns_variable(const std::vector<Statement>& stmts, const std::string& var) {
  std::set<std::string> assigned;
  collect_assigned_vars(stmts, assigned);
  return assigned.count(var) > 0;
}

std::string fresh_name(const Program& p, const std::string& base) {
  std::string name = base;
  std::set<std::string> taken = p.variables;
  taken.insert(p.symbols.begin(), p.symbols.end());
  unsigned k = 1;
  while (taken.count(name)) name = base + "_" + std::to_string(k++);
  return name;
}

}  // namespace

std::pair<Program, std::vector<InfiniteConditionInfo>> approximate_infinite_conditions(
    const Program& p_in, bool force) {
  Program p = desugar_else_if(p_in);
  std::vector<InfiniteConditionInfo> infos;

  while (true) {
    TypeEnv types = infer_types(p);
    SiteRef site;
    if (!find_infinite_site(p, types, &site)) break;

    IfStmt& f = (*site.list)[site.index].if_stmt();
    IfBranch& branch = f.branches[site.branch];
    BoolPtr cond = branch.cond;

    // Split F and I: conjuncts mentioning a non-finite variable form I.
    std::vector<BoolPtr> conjuncts;
    flatten_conjuncts(cond, conjuncts);
    std::vector<BoolPtr> finite_parts, infinite_parts;
    for (const auto& c : conjuncts) {
      std::set<std::string> ids;
      bool_collect_idents(c, ids);
      bool has_infinite = false;
      for (const auto& id : ids) {
        if (!p.variables.count(id)) continue;
        auto it = types.find(id);
        if (it == types.end() || it->second.infinite) has_infinite = true;
      }
      (has_infinite ? infinite_parts : finite_parts).push_back(c);
    }
    if (infinite_parts.empty()) {
      fail(ErrorCode::Internal, "site lost its non-finite conjunct");
    }
    BoolPtr infinite_cond = infinite_parts[0];
    for (std::size_t i = 1; i < infinite_parts.size(); ++i) {
      infinite_cond = bool_and(infinite_cond, infinite_parts[i]);
    }

    std::set<std::string> i_vars;
    bool_collect_idents(infinite_cond, i_vars);
    for (auto it = i_vars.begin(); it != i_vars.end();) {
      if (!p.variables.count(*it)) {
        it = i_vars.erase(it);
      } else {
        ++it;
      }
    }

    InfiniteConditionInfo info;
    info.condition = bool_to_string(infinite_cond);

    // Assumption checks (conservative, via the dependency relation).
    DepGraph deps = build_dependencies(p, types);
    // (1) iteration independence: no self-dependency in the cone of any
    // variable of I.
    for (const auto& x : i_vars) {
      for (const auto& y : deps.ancestors(x)) {
        if (deps.depends_on(y, y)) {
          info.unverified.push_back("iteration independence: '" + y +
                                    "' in the cone of '" + x + "' is self-dependent");
        }
      }
    }
    // Within-iteration flow out of I (excluding this condition itself).
    std::set<std::string> flow = forward_flow(p, i_vars, cond);
    // (2) independence from the finite part and from branch conditions.
    std::set<std::string> f_vars;
    for (const auto& c : finite_parts) bool_collect_idents(c, f_vars);
    collect_branch_conditions(branch.body, f_vars);
    for (const auto& v : f_vars) {
      if (flow.count(v)) {
        info.unverified.push_back("independence of condition variables: '" + v +
                                  "' carries data from the non-finite condition");
      }
    }
    // (3) independence from branch assignment reads.
    std::set<std::string> branch_reads;
    collect_assignment_reads(branch.body, branch_reads);
    for (const auto& v : branch_reads) {
      if (flow.count(v)) {
        info.unverified.push_back("independence of branch assignments: '" + v +
                                  "' carries data from the non-finite condition");
      }
    }
    // Variables of I should not be assigned inside the branch.
    for (const auto& x : i_vars) {
      if (assigns_variable(branch.body, x)) {
        info.unverified.push_back("'" + x + "' is reassigned inside the guarded branch");
      }
    }

    if (!info.unverified.empty() && !force) {
      std::string msg = "cannot verify the independence assumptions for condition '" +
                        info.condition + "':";
      for (const auto& u : info.unverified) msg += "\n  - " + u;
      throw Error(ErrorCode::AssumptionUnverified, msg);
    }

    // Rewrite: t = Bernoulli(p_sym) before the if, condition F and t == 1.
    std::string symbol = fresh_name(p, slugify_condition(info.condition));
    info.symbol = symbol;
    std::string tvar = fresh_name(p, "_c1");
    info.fresh_var = tvar;

    DistCall bern;
    bern.kind = DistKind::Bernoulli;
    bern.params = {expr_ident(symbol)};
    bern.draw_id = 90000 + static_cast<unsigned>(infos.size());
    Rhs bern_rhs;
    bern_rhs.node = std::move(bern);
    AssignStmt draw;
    draw.targets = {tvar};
    draw.values = {std::move(bern_rhs)};
    Statement draw_stmt;
    draw_stmt.node = std::move(draw);

    BoolPtr replaced = bool_cmp(CmpOp::Eq, expr_ident(tvar), expr_number(Rational(1)));
    for (auto it = finite_parts.rbegin(); it != finite_parts.rend(); ++it) {
      replaced = bool_and(*it, replaced);
    }
    branch.cond = replaced;
    site.list->insert(site.list->begin() + static_cast<long>(site.index),
                      std::move(draw_stmt));
    p.reclassify();
    infos.push_back(std::move(info));
  }
  return {p, infos};
}

Analysis analyze_program(const Program& p, const PipelineOptions& opts) {
  Analysis a;
  a.source = p;
  Program work = fold_init_constants(p);
  work = encode_guard(work, &a.loop_guard);
  if (opts.approx_infinite_conditions) {
    auto [rewritten, infos] = approximate_infinite_conditions(work, opts.force_approx);
    work = std::move(rewritten);
    a.rewrites = std::move(infos);
  }
  a.analyzed = work;
  a.normalized = normalize(work);
  a.types = infer_types(a.normalized);
  a.deps = build_dependencies(a.normalized, a.types);
  a.order = build_var_order(a.deps, a.normalized.as_program(), a.types);
  return a;
}

namespace {

[[noreturn]] void throw_rejection(const Verdict& v) {
  if (v.condition == 1) {
    std::string msg = "polynomial self-dependency: ";
    for (std::size_t i = 0; i < v.witness_cycle.size(); ++i) {
      if (i > 0) msg += " -> ";
      msg += v.witness_cycle[i];
    }
    throw Error(ErrorCode::ValidationError, msg);
  }
  throw Error(ErrorCode::NonFiniteCondition,
              "non-finite variable '" + v.witness_variable + "' in condition '" +
                  v.witness_condition + "'");
}

}  // namespace

MomentComputation compute_moments(const Analysis& a, const std::vector<GoalSpec>& goals) {
  Program view = a.normalized.as_program();
  std::vector<VarPoly> goal_polys;
  for (const auto& g : goals) {
    if (!a.normalized.variables.count(g.var)) {
      fail(ErrorCode::UsageError, "unknown program variable '" + g.var + "'");
    }
    if (g.k == 0) fail(ErrorCode::UsageError, "moment order must be >= 1");
    Verdict v = check_computability_for_goal(a.deps, view, a.types, g.var);
    if (!v.accepted) throw_rejection(v);
    goal_polys.push_back(VarPoly::monomial(Monomial{{g.var, g.k}}, Scalar(Rational(1))));
  }

  MomentComputation out;
  RecurrenceBuilder builder(a.normalized, a.types, a.order);
  out.system = builder.build(goal_polys, &out.combos);
  out.solution = solve(out.system);
  for (const auto& combo : out.combos) {
    try {
      out.closed_forms.push_back(out.solution.combo_closed_form(combo));
      out.failures.emplace_back();
    } catch (const Error& e) {
      out.closed_forms.push_back(std::nullopt);
      out.failures.push_back(std::string(e.code_name()) + ": " + e.what());
    }
  }
  return out;
}

MomentVector moment_vector(const Analysis& a, const std::string& var, unsigned max_order) {
  std::vector<GoalSpec> goals;
  for (unsigned k = 1; k <= max_order; ++k) goals.push_back(GoalSpec{var, k});
  MomentComputation mc = compute_moments(a, goals);
  MomentVector mv;
  mv.variable = var;
  mv.raw.push_back(ExpPoly::constant(Surd(Scalar(Rational(1)))));
  for (unsigned k = 1; k <= max_order; ++k) {
    const auto& cf = mc.closed_forms[k - 1];
    if (!cf) {
      fail(ErrorCode::UnsupportedAlgebraicDegree,
           "no closed form for E(" + var + "^" + std::to_string(k) + "): " +
               mc.failures[k - 1]);
    }
    mv.raw.push_back(*cf);
  }
  return mv;
}

TerminationMoment termination_moment(const Analysis& a, const std::string& var, unsigned k) {
  if (!a.loop_guard) {
    fail(ErrorCode::UsageError, "program has a trivially-true loop condition");
  }
  if (!a.normalized.variables.count(var)) {
    fail(ErrorCode::UsageError, "unknown program variable '" + var + "'");
  }
  Program view = a.normalized.as_program();
  // The guard is subject to the same finiteness restriction as if-conditions.
  std::set<std::string> guard_vars;
  bool_collect_idents(a.loop_guard, guard_vars);
  for (const auto& v : guard_vars) {
    if (!a.normalized.variables.count(v)) continue;
    auto it = a.types.find(v);
    if (it == a.types.end() || it->second.infinite) {
      fail(ErrorCode::NonFiniteCondition,
           "loop condition contains non-finite variable '" + v + "'");
    }
  }
  Verdict v = check_computability_for_goal(a.deps, view, a.types, var);
  if (!v.accepted) throw_rejection(v);

  VarPoly not_guard =
      indicator_poly(bool_not(a.loop_guard), a.types, a.normalized.variables);
  VarPoly xk = VarPoly::monomial(Monomial{{var, k}}, Scalar(Rational(1)));
  std::vector<VarPoly> goal_polys{xk * not_guard, not_guard};

  RecurrenceBuilder builder(a.normalized, a.types, a.order);
  std::vector<GoalCombo> combos;
  RecurrenceSystem sys = builder.build(goal_polys, &combos);
  SolveResult sol = solve(sys);
  ExpPoly num = sol.combo_closed_form(combos[0]);
  ExpPoly den = sol.combo_closed_form(combos[1]);
  TerminationMoment out;
  out.conditional_numerator = num;
  out.conditional_denominator = den;
  out.value = limit_of_ratio(num, den);
  return out;
}

RecoveredDistribution recover_variable_distribution(const Analysis& a, const std::string& var) {
  auto it = a.types.find(var);
  if (it == a.types.end()) {
    fail(ErrorCode::UsageError, "unknown program variable '" + var + "'");
  }
  if (it->second.infinite) {
    fail(ErrorCode::NonFiniteCondition,
         "variable '" + var + "' has no finite support; distribution recovery needs one");
  }
  const std::vector<Scalar>& support = it->second.values;
  MomentVector mv = moment_vector(a, var, static_cast<unsigned>(support.size() - 1));
  return recover_distribution(support, mv.raw);
}

}  // namespace momentforge

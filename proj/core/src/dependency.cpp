#include "momentforge/dependency.hpp"

#include <algorithm>
#include <functional>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/printer.hpp"

namespace momentforge {

bool DepGraph::depends_on(const std::string& y, const std::string& x) const {
  auto it = reaches.find(y);
  return it != reaches.end() && it->second.count(x) > 0;
}

bool DepGraph::depends_poly_on(const std::string& y, const std::string& x) const {
  auto it = reaches.find(y);
  if (it == reaches.end()) return false;
  auto jt = it->second.find(x);
  return jt != it->second.end() && jt->second;
}

std::set<std::string> DepGraph::ancestors(const std::string& y) const {
  std::set<std::string> out{y};
  auto it = reaches.find(y);
  if (it != reaches.end()) {
    for (const auto& [x, poly] : it->second) out.insert(x);
  }
  return out;
}

namespace {

bool is_finite_var(const TypeEnv& types, const std::string& v) {
  auto it = types.find(v);
  return it != types.end() && it->second.is_finite();
}

class DepBuilder {
 public:
  DepBuilder(const Program& p, const TypeEnv& types) : p_(p), types_(types) {}

  DepGraph run() {
    for (const auto& v : p_.variables) g_.depends[v];
    walk(p_.body, {});
    // The init block contributes no iteration-to-iteration dependencies.
    close();
    return std::move(g_);
  }

 private:
  void add_edge(const std::string& y, const std::string& x, DepEdge e) {
    if (!p_.variables.count(x)) return;  // symbolic constants are not nodes
    g_.depends[y][x].merge(e);
  }

  // cond_vars: variables of every enclosing if-condition.
  void walk(const std::vector<Statement>& stmts, std::set<std::string> cond_vars) {
    for (const auto& s : stmts) {
      if (s.is_if()) {
        for (const auto& br : s.if_stmt().branches) {
          std::set<std::string> inner = cond_vars;
          bool_collect_idents(br.cond, inner);
          walk(br.body, inner);
        }
        if (!s.if_stmt().else_body.empty()) {
          std::set<std::string> inner = cond_vars;
          for (const auto& br : s.if_stmt().branches) bool_collect_idents(br.cond, inner);
          walk(s.if_stmt().else_body, inner);
        }
        continue;
      }
      const auto& a = s.assign();
      std::set<std::string> guard_vars = cond_vars;
      if (a.guard) bool_collect_idents(a.guard, guard_vars);
      for (std::size_t i = 0; i < a.targets.size(); ++i) {
        const std::string& y = a.targets[i];
        for (const auto& c : guard_vars) {
          add_edge(y, c, DepEdge{.conditional = true});
        }
        if (!a.default_var.empty() && a.default_var != y) {
          note_poly_vars(y, VarPoly::variable(a.default_var));
        }
        note_rhs(y, a.values[i]);
      }
    }
  }

  void note_rhs(const std::string& y, const Rhs& rhs) {
    if (rhs.is_categorical()) {
      for (const auto& opt : rhs.categorical().options) {
        note_poly_vars(y, expr_to_varpoly(opt.value, p_.variables));
      }
    } else {
      for (const auto& param : rhs.dist().params) {
        note_poly_vars(y, expr_to_varpoly(param, p_.variables));
      }
    }
  }

  void note_poly_vars(const std::string& y, const VarPoly& poly) {
    for (const auto& x : poly.vars()) {
      bool linear_everywhere = true;
      for (const auto& [mono, coeff] : poly.terms()) {
        auto it = mono.find(x);
        if (it == mono.end()) continue;
        if (it->second > 1) linear_everywhere = false;
      }
      DepEdge e;
      bool fin = is_finite_var(types_, x);
      if (fin) e.finite = true;
      if (linear_everywhere) {
        // "appears only linearly in every assignment" is refined after the
        // walk; record per-occurrence linearity here.
        e.linear = true;
      } else if (!fin) {
        e.polynomial = true;
      }
      add_edge(y, x, e);
    }
  }

  void close() {
    // A non-linear occurrence anywhere cancels the pure-linear label.
    for (auto& [y, edges] : g_.depends) {
      for (auto& [x, e] : edges) {
        if (e.polynomial) e.linear = false;
      }
    }
    // Floyd-Warshall closure with polynomial promotion.
    auto& r = g_.reaches;
    for (const auto& [y, edges] : g_.depends) {
      for (const auto& [x, e] : edges) {
        if (e.any()) {
          bool& poly = r[y][x];
          poly = poly || e.polynomial;
        }
      }
    }
    std::vector<std::string> nodes;
    for (const auto& [v, ignored] : g_.depends) nodes.push_back(v);
    for (const auto& k : nodes) {
      for (const auto& i : nodes) {
        auto ik = r[i].find(k);
        if (ik == r[i].end()) continue;
        for (const auto& [j, kj_poly] : r[k]) {
          bool& ij = r[i][j];
          ij = ij || ik->second || kj_poly;
        }
      }
    }
  }

  const Program& p_;
  const TypeEnv& types_;
  DepGraph g_;
};

}  // namespace

DepGraph build_dependencies(const Program& p, const TypeEnv& types) {
  return DepBuilder(p, types).run();
}

DepGraph build_dependencies(const NormalizedProgram& p, const TypeEnv& types) {
  return build_dependencies(p.as_program(), types);
}

namespace {

void collect_conditions(const std::vector<Statement>& stmts,
                        std::vector<BoolPtr>& conditions) {
  for (const auto& s : stmts) {
    if (s.is_if()) {
      for (const auto& br : s.if_stmt().branches) {
        conditions.push_back(br.cond);
        collect_conditions(br.body, conditions);
      }
      collect_conditions(s.if_stmt().else_body, conditions);
    } else if (s.assign().guard && !bool_is_true(s.assign().guard)) {
      conditions.push_back(s.assign().guard);
    }
  }
}

std::vector<std::string> find_poly_cycle(const DepGraph& g, const std::string& start) {
  // Some cycle through `start` that contains a polynomial edge. Breadth-first
  // over direct edges, tracking whether a polynomial edge was used.
  struct Node {
    std::string var;
    bool poly;
  };
  std::map<std::pair<std::string, bool>, std::pair<std::string, bool>> parent;
  std::vector<Node> queue{{start, false}};
  parent[{start, false}] = {start, false};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Node cur = queue[qi];
    auto it = g.depends.find(cur.var);
    if (it == g.depends.end()) continue;
    for (const auto& [x, e] : it->second) {
      if (!e.any()) continue;
      bool poly = cur.poly || e.polynomial;
      if (x == start && poly) {
        // Reconstruct path.
        std::vector<std::string> path{start};
        std::pair<std::string, bool> at{cur.var, cur.poly};
        while (at.first != start || at.second) {
          path.push_back(at.first);
          at = parent[at];
        }
        if (path.size() > 1) std::reverse(path.begin() + 1, path.end());
        return path;
      }
      if (!parent.count({x, poly})) {
        parent[{x, poly}] = {cur.var, cur.poly};
        queue.push_back({x, poly});
      }
    }
  }
  return {start};
}

Verdict check_impl(const DepGraph& g, const Program& p, const TypeEnv& types,
                   const std::set<std::string>* cone) {
  Verdict v;
  // Condition 1: no polynomial self-dependency.
  for (const auto& [y, ignored] : g.depends) {
    if (cone && !cone->count(y)) continue;
    if (g.depends_poly_on(y, y)) {
      v.accepted = false;
      v.condition = 1;
      v.witness_cycle = find_poly_cycle(g, y);
      return v;
    }
  }
  // Condition 2: condition variables must be finite.
  std::vector<BoolPtr> conditions;
  collect_conditions(p.init, conditions);
  collect_conditions(p.body, conditions);
  for (const auto& cond : conditions) {
    std::set<std::string> ids;
    bool_collect_idents(cond, ids);
    for (const auto& id : ids) {
      if (!p.variables.count(id)) continue;  // symbolic constants are fixed reals
      if (cone && !cone->count(id)) continue;
      auto it = types.find(id);
      if (it == types.end() || it->second.infinite) {
        v.accepted = false;
        v.condition = 2;
        v.witness_condition = bool_to_string(cond);
        v.witness_variable = id;
        return v;
      }
    }
  }
  return v;
}

}  // namespace

Verdict check_computability(const DepGraph& g, const Program& p, const TypeEnv& types) {
  return check_impl(g, p, types, nullptr);
}

Verdict check_computability(const DepGraph& g, const NormalizedProgram& p,
                            const TypeEnv& types) {
  Program view = p.as_program();
  return check_impl(g, view, types, nullptr);
}

Verdict check_computability_for_goal(const DepGraph& g, const Program& p, const TypeEnv& types,
                                     const std::string& goal_var) {
  std::set<std::string> cone = g.ancestors(goal_var);
  return check_impl(g, p, types, &cone);
}

namespace {

// First-assignment order of variables, for deterministic tie-breaking.
void assignment_order(const std::vector<Statement>& stmts, std::vector<std::string>& order,
                      std::set<std::string>& seen) {
  for (const auto& s : stmts) {
    if (s.is_assign()) {
      for (const auto& t : s.assign().targets) {
        if (seen.insert(t).second) order.push_back(t);
      }
    } else {
      for (const auto& br : s.if_stmt().branches) assignment_order(br.body, order, seen);
      assignment_order(s.if_stmt().else_body, order, seen);
    }
  }
}

}  // namespace

VarOrder build_var_order(const DepGraph& g, const Program& p, const TypeEnv& types) {
  std::vector<std::string> decl_order;
  std::set<std::string> seen;
  assignment_order(p.init, decl_order, seen);
  assignment_order(p.body, decl_order, seen);
  for (const auto& v : p.variables) {
    if (seen.insert(v).second) decl_order.push_back(v);
  }
  std::map<std::string, std::size_t> decl_index;
  for (std::size_t i = 0; i < decl_order.size(); ++i) decl_index[decl_order[i]] = i;

  // Equivalence classes: mutual dependency (x ~ y iff both reach each other).
  VarOrder order;
  std::map<std::string, std::size_t> assigned;
  for (const auto& v : decl_order) {
    if (assigned.count(v)) continue;
    std::vector<std::string> cls{v};
    for (const auto& w : decl_order) {
      if (w == v || assigned.count(w)) continue;
      if (g.depends_on(v, w) && g.depends_on(w, v)) cls.push_back(w);
    }
    std::size_t id = order.classes.size();
    for (const auto& w : cls) assigned[w] = id;
    order.classes.push_back(std::move(cls));
  }

  // Topological sort of classes: class(x) before class(y) when y depends on x.
  std::size_t n = order.classes.size();
  std::vector<std::set<std::size_t>> preds(n);  // classes that must come first
  for (const auto& [y, edges] : g.reaches) {
    for (const auto& [x, poly] : edges) {
      std::size_t cy = assigned[y], cx = assigned[x];
      if (cy != cx) preds[cy].insert(cx);
    }
  }
  std::vector<bool> done(n, false);
  std::vector<std::vector<std::string>> sorted;
  std::vector<std::size_t> remap(n);
  for (std::size_t round = 0; round < n; ++round) {
    // Smallest declaration index among ready classes.
    std::size_t best = n;
    std::size_t best_decl = decl_order.size() + 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (done[c]) continue;
      bool ready = true;
      for (std::size_t d : preds[c]) {
        if (!done[d]) {
          ready = false;
          break;
        }
      }
      if (!ready) continue;
      std::size_t di = decl_index[order.classes[c][0]];
      if (di < best_decl) {
        best_decl = di;
        best = c;
      }
    }
    if (best == n) fail(ErrorCode::Internal, "dependency classes do not order");
    done[best] = true;
    remap[best] = sorted.size();
    sorted.push_back(order.classes[best]);
  }

  VarOrder out;
  out.classes = std::move(sorted);
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    std::sort(out.classes[c].begin(), out.classes[c].end(),
              [&](const std::string& a, const std::string& b) {
                return decl_index[a] < decl_index[b];
              });
    for (const auto& v : out.classes[c]) out.class_of[v] = c;
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    bool has_nonfinite = false;
    for (const auto& v : out.classes[c]) {
      if (!is_finite_var(types, v)) has_nonfinite = true;
    }
    if (has_nonfinite) {
      out.nonfinite_slot[c] = out.nonfinite_classes.size();
      out.nonfinite_classes.push_back(c);
    }
  }
  return out;
}

VarOrder build_var_order(const DepGraph& g, const NormalizedProgram& p, const TypeEnv& types) {
  Program view = p.as_program();
  return build_var_order(g, view, types);
}

MonomialKey monomial_key(const Monomial& m, const VarOrder& order, const TypeEnv& types) {
  MonomialKey key(order.nonfinite_classes.size(), 0);
  for (const auto& [v, e] : m) {
    if (is_finite_var(types, v)) continue;  // finite powers live in the trivial class
    auto it = order.class_of.find(v);
    if (it == order.class_of.end()) {
      fail(ErrorCode::Internal, "variable '" + v + "' missing from the order");
    }
    auto slot = order.nonfinite_slot.find(it->second);
    if (slot == order.nonfinite_slot.end()) {
      fail(ErrorCode::Internal, "non-finite variable in a finite-only class");
    }
    key[slot->second] += e;
  }
  return key;
}

int key_compare(const MonomialKey& a, const MonomialKey& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = n; i > 0; --i) {
    unsigned x = (i - 1) < a.size() ? a[i - 1] : 0;
    unsigned y = (i - 1) < b.size() ? b[i - 1] : 0;
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

Ordering monomial_compare(const Monomial& a, const Monomial& b, const VarOrder& order,
                          const TypeEnv& types) {
  int c = key_compare(monomial_key(a, order, types), monomial_key(b, order, types));
  if (c < 0) return Ordering::Less;
  if (c > 0) return Ordering::Greater;
  return Ordering::Equivalent;
}

}  // namespace momentforge

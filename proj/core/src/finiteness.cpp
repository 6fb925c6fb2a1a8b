#include "momentforge/finiteness.hpp"

#include <algorithm>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"

namespace momentforge {

namespace {

// Distinctness that stays valid for every real instantiation of the symbolic
// constants: differences must be nonzero rationals.
bool provably_distinct(const Scalar& a, const Scalar& b) {
  Scalar diff = a - b;
  if (diff.is_zero()) return false;
  return diff.is_rational();
}

ValueSet make_set(std::vector<Scalar> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() > kValueSetCap) return ValueSet::top();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (!provably_distinct(values[i], values[j])) return ValueSet::top();
    }
  }
  return ValueSet{false, std::move(values)};
}

constexpr std::size_t kAbstractEvalCap = 4096;

}  // namespace

bool ValueSet::contains(const Scalar& v) const {
  if (infinite) return true;
  return std::binary_search(values.begin(), values.end(), v);
}

ValueSet value_set_union(const ValueSet& a, const ValueSet& b) {
  if (a.infinite || b.infinite) return ValueSet::top();
  std::vector<Scalar> merged = a.values;
  merged.insert(merged.end(), b.values.begin(), b.values.end());
  return make_set(std::move(merged));
}

namespace {

class TypeInference {
 public:
  explicit TypeInference(const Program& p) : p_(p) {}

  TypeEnv run() {
    // A variable whose pre-state can be observed starts as its own symbolic
    // constant; everything else starts bottom and is filled by assignments.
    std::set<std::string> pre_read = pre_state_reads(p_);
    for (const auto& v : p_.variables) {
      if (pre_read.count(v)) {
        env_[v] = ValueSet::single(Scalar::symbol(init_symbol_name(v)));
      } else {
        env_[v] = ValueSet{false, {}};
      }
    }
    exec_block(p_.init);

    // Body iterations: entries only grow, so iterate to a fixpoint with a
    // deterministic bound, then widen whatever is still unstable.
    const std::size_t bound = p_.variables.size() * kValueSetCap + 2;
    for (std::size_t round = 0; round < bound; ++round) {
      TypeEnv before = env_;
      exec_block(p_.body);
      for (auto& [v, set] : env_) {
        set = value_set_union(before[v], set);
      }
      if (env_ == before) return env_;
    }
    for (auto& [v, set] : env_) {
      if (!set.infinite) set = ValueSet::top();
    }
    return env_;
  }

  // Name for the symbolic initial value of an uninitialized variable.
  std::string init_symbol_name(const std::string& var) const {
    std::string name = var + "0";
    while (p_.variables.count(name) || p_.symbols.count(name)) name += "_";
    return name;
  }

 private:
  void exec_block(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) exec_statement(s);
  }

  void exec_statement(const Statement& s) {
    if (s.is_if()) {
      // Join over all branches and the fall-through (no condition refinement).
      TypeEnv incoming = env_;
      TypeEnv joined = env_;
      for (const auto& br : s.if_stmt().branches) {
        env_ = incoming;
        exec_block(br.body);
        for (auto& [v, set] : joined) set = value_set_union(set, env_[v]);
      }
      env_ = incoming;
      exec_block(s.if_stmt().else_body);
      for (auto& [v, set] : joined) set = value_set_union(set, env_[v]);
      env_ = std::move(joined);
      return;
    }

    const auto& a = s.assign();
    // Simultaneous: evaluate all right-hand sides on the incoming state.
    std::vector<ValueSet> new_vals;
    new_vals.reserve(a.targets.size());
    for (const auto& rhs : a.values) new_vals.push_back(eval_rhs(rhs));
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      ValueSet v = new_vals[i];
      if (a.guard && !bool_is_true(a.guard)) {
        const std::string& def = a.default_var.empty() ? a.targets[i] : a.default_var;
        v = value_set_union(v, lookup(def));
      }
      env_[a.targets[i]] = v;
    }
  }

  ValueSet lookup(const std::string& name) const {
    auto it = env_.find(name);
    if (it != env_.end()) return it->second;
    // Symbolic constant: a fixed (unknown) real.
    return ValueSet::single(Scalar::symbol(name));
  }

  ValueSet eval_rhs(const Rhs& rhs) {
    if (rhs.is_dist()) {
      if (rhs.dist().kind == DistKind::Bernoulli) {
        return make_set({Scalar(Rational(0)), Scalar(Rational(1))});
      }
      return ValueSet::top();
    }
    ValueSet out{false, {}};
    for (const auto& opt : rhs.categorical().options) {
      out = value_set_union(out, eval_poly(opt.value));
      if (out.infinite) return out;
    }
    return out;
  }

  // Image of a polynomial over the variables' finite supports.
  ValueSet eval_poly(const ExprPtr& e) {
    std::set<std::string> ids;
    expr_collect_idents(e, ids);
    std::vector<std::string> vars;
    std::size_t combos = 1;
    for (const auto& id : ids) {
      if (!p_.variables.count(id)) continue;  // symbolic constant, exact
      ValueSet vs = lookup(id);
      if (vs.infinite) return ValueSet::top();
      vars.push_back(id);
      combos *= vs.size();
      if (combos > kAbstractEvalCap) return ValueSet::top();
    }
    VarPoly poly = expr_to_varpoly(e, p_.variables);
    std::vector<Scalar> image;
    std::map<std::string, Scalar> assignment;
    enumerate(poly, vars, 0, assignment, image);
    return make_set(std::move(image));
  }

  void enumerate(const VarPoly& poly, const std::vector<std::string>& vars, std::size_t i,
                 std::map<std::string, Scalar>& assignment, std::vector<Scalar>& image) {
    if (i == vars.size()) {
      image.push_back(poly.evaluate(assignment));
      return;
    }
    const ValueSet vs = lookup(vars[i]);
    for (const auto& val : vs.values) {
      assignment[vars[i]] = val;
      enumerate(poly, vars, i + 1, assignment, image);
    }
    assignment.erase(vars[i]);
  }

  const Program& p_;
  TypeEnv env_;
};

}  // namespace

TypeEnv infer_types(const Program& p) { return TypeInference(p).run(); }

TypeEnv infer_types(const NormalizedProgram& p) { return infer_types(p.as_program()); }

const std::vector<Scalar>& finite_support(const TypeEnv& env, const std::string& var) {
  auto it = env.find(var);
  if (it == env.end()) {
    fail(ErrorCode::Internal, "no type entry for variable '" + var + "'");
  }
  if (it->second.infinite) {
    fail(ErrorCode::NonFiniteCondition, "variable '" + var + "' is not finite");
  }
  return it->second.values;
}

}  // namespace momentforge

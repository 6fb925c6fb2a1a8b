#include "momentforge/simulate.hpp"

#include <cmath>
#include <functional>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"

namespace momentforge {

std::string init_value_symbol(const std::set<std::string>& variables,
                              const std::set<std::string>& symbols, const std::string& var) {
  std::string name = var + "0";
  while (variables.count(name) || symbols.count(name)) name += "_";
  return name;
}

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

Rational ExactDistribution::total_probability() const {
  Rational t(0);
  for (const auto& [s, p] : states) t += p;
  return t;
}

Rational ExactDistribution::moment(const std::string& var, unsigned k) const {
  Monomial m;
  if (k > 0) m[var] = k;
  return moment(m);
}

Rational ExactDistribution::moment(const Monomial& m) const {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;
  Rational out(0);
  for (const auto& [state, prob] : states) {
    Rational term = prob;
    for (const auto& [v, e] : m) {
      auto it = pos.find(v);
      if (it == pos.end()) fail(ErrorCode::Internal, "moment of unknown variable '" + v + "'");
      term *= rational_pow(state[it->second], e);
    }
    out += term;
  }
  return out;
}

ExactDistribution ExactDistribution::project(const std::set<std::string>& keep) const {
  ExactDistribution out;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (keep.count(vars[i])) {
      out.vars.push_back(vars[i]);
      idx.push_back(i);
    }
  }
  for (const auto& [state, prob] : states) {
    std::vector<Rational> proj;
    proj.reserve(idx.size());
    for (auto i : idx) proj.push_back(state[i]);
    out.states[proj] += prob;
  }
  return out;
}

namespace {

using RatState = std::map<std::string, Rational>;

class Enumerator {
 public:
  Enumerator(const Program& p, const EnumOptions& opts) : p_(p), opts_(opts) {}

  ExactDistribution run(std::uint64_t n) {
    RatState init_state;
    std::set<std::string> needed = pre_state_reads(p_);
    for (const auto& v : p_.variables) {
      std::string sym = init_value_symbol(p_.variables, p_.symbols, v);
      auto it = opts_.bindings.find(sym);
      if (it != opts_.bindings.end()) {
        init_state[v] = it->second;
      } else if (needed.count(v)) {
        fail(ErrorCode::ValidationError,
             "variable '" + v + "' is read before assignment; bind '" + sym + "'");
      } else {
        init_state[v] = Rational(0);  // overwritten before any read
      }
    }
    std::map<RatState, Rational> current{{init_state, Rational(1)}};
    current = step(current, p_.init, true);
    for (std::uint64_t i = 0; i < n; ++i) {
      current = step(current, p_.body, false);
    }

    ExactDistribution out;
    for (const auto& v : p_.variables) out.vars.push_back(v);
    for (const auto& [state, prob] : current) {
      std::vector<Rational> key;
      key.reserve(out.vars.size());
      for (const auto& v : out.vars) key.push_back(state.at(v));
      out.states[key] += prob;
    }
    return out;
  }

 private:
  std::map<RatState, Rational> step(const std::map<RatState, Rational>& in,
                                    const std::vector<Statement>& stmts, bool is_init) {
    std::map<RatState, Rational> out;
    for (const auto& [state, prob] : in) {
      // A guarded loop iterates only while its condition holds.
      if (!is_init && !bool_is_true(p_.guard) && !eval_bool(p_.guard, state)) {
        out[state] += prob;
        continue;
      }
      exec_statements(stmts, state, prob, 0, [&](const RatState& s, const Rational& p) {
        out[s] += p;
        if (out.size() > opts_.state_cap) {
          fail(ErrorCode::StateExplosion,
               "state count exceeds cap of " + std::to_string(opts_.state_cap));
        }
      });
    }
    return out;
  }

  using Sink = std::function<void(const RatState&, const Rational&)>;

  void exec_statements(const std::vector<Statement>& stmts, RatState state, Rational prob,
                       std::size_t idx, const Sink& sink) {
    if (idx == stmts.size()) {
      sink(state, prob);
      return;
    }
    const Statement& s = stmts[idx];
    if (s.is_if()) {
      const auto& f = s.if_stmt();
      for (const auto& br : f.branches) {
        if (eval_bool(br.cond, state)) {
          exec_statements(br.body, state, prob, 0,
                          [&](const RatState& s2, const Rational& p2) {
                            exec_statements(stmts, s2, p2, idx + 1, sink);
                          });
          return;
        }
      }
      exec_statements(f.else_body, state, prob, 0,
                      [&](const RatState& s2, const Rational& p2) {
                        exec_statements(stmts, s2, p2, idx + 1, sink);
                      });
      return;
    }

    const auto& a = s.assign();
    // Guard of a normalized assignment: evaluated before the assignment.
    if (a.guard && !bool_is_true(a.guard) && !eval_bool(a.guard, state)) {
      const std::string& def = a.default_var.empty() ? a.targets[0] : a.default_var;
      state[a.targets[0]] = state.at(def);
      exec_statements(stmts, state, prob, idx + 1, sink);
      return;
    }

    // Simultaneous: all right-hand sides branch on the incoming state.
    branch_values(a, 0, state, prob, std::vector<Rational>{}, stmts, idx, sink);
  }

  void branch_values(const AssignStmt& a, std::size_t vi, const RatState& state,
                     const Rational& prob, std::vector<Rational> acc,
                     const std::vector<Statement>& stmts, std::size_t idx, const Sink& sink) {
    if (vi == a.values.size()) {
      RatState next = state;
      for (std::size_t i = 0; i < a.targets.size(); ++i) next[a.targets[i]] = acc[i];
      exec_statements(stmts, std::move(next), prob, idx + 1, sink);
      return;
    }
    const Rhs& rhs = a.values[vi];
    if (rhs.is_categorical()) {
      const auto& cat = rhs.categorical();
      std::vector<Scalar> probs = categorical_probs(cat, p_.variables);
      for (std::size_t i = 0; i < cat.options.size(); ++i) {
        Rational pi = probs[i].evaluate(opts_.bindings);
        if (pi == 0) continue;
        std::vector<Rational> acc2 = acc;
        acc2.push_back(eval_expr(cat.options[i].value, state));
        branch_values(a, vi + 1, state, prob * pi, std::move(acc2), stmts, idx, sink);
      }
      return;
    }
    const DistCall& d = rhs.dist();
    if (d.kind != DistKind::Bernoulli) {
      fail(ErrorCode::ContinuousDistribution,
           std::string("cannot enumerate draws from ") + dist_kind_name(d.kind));
    }
    Rational p = eval_expr(d.params[0], state);
    if (p < 0 || p > 1) {
      fail(ErrorCode::ProbabilityError,
           "Bernoulli parameter " + rational_to_string(p) + " outside [0,1]");
    }
    if (p != 0) {
      std::vector<Rational> acc1 = acc;
      acc1.push_back(Rational(1));
      branch_values(a, vi + 1, state, prob * p, std::move(acc1), stmts, idx, sink);
    }
    if (p != 1) {
      std::vector<Rational> acc0 = acc;
      acc0.push_back(Rational(0));
      branch_values(a, vi + 1, state, prob * (1 - p), std::move(acc0), stmts, idx, sink);
    }
  }

  Rational eval_expr(const ExprPtr& e, const RatState& state) const {
    switch (e->kind) {
      case Expr::Kind::Number: return e->number;
      case Expr::Kind::Ident: {
        auto it = state.find(e->ident);
        if (it != state.end()) return it->second;
        auto bt = opts_.bindings.find(e->ident);
        if (bt == opts_.bindings.end()) {
          fail(ErrorCode::ValidationError,
               "unbound symbolic constant '" + e->ident + "' in enumeration");
        }
        return bt->second;
      }
      case Expr::Kind::Neg: return -eval_expr(e->lhs, state);
      case Expr::Kind::Pow: return rational_pow(eval_expr(e->lhs, state), e->exponent);
      case Expr::Kind::Add: return eval_expr(e->lhs, state) + eval_expr(e->rhs, state);
      case Expr::Kind::Sub: return eval_expr(e->lhs, state) - eval_expr(e->rhs, state);
      case Expr::Kind::Mul: return eval_expr(e->lhs, state) * eval_expr(e->rhs, state);
      case Expr::Kind::Div: {
        Rational den = eval_expr(e->rhs, state);
        if (den == 0) fail(ErrorCode::ZeroDenominator, "division by zero at runtime");
        return eval_expr(e->lhs, state) / den;
      }
    }
    fail(ErrorCode::Internal, "unreachable expression kind");
  }

  bool eval_bool(const BoolPtr& b, const RatState& state) const {
    switch (b->kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::Not: return !eval_bool(b->a, state);
      case BoolExpr::Kind::And: return eval_bool(b->a, state) && eval_bool(b->b, state);
      case BoolExpr::Kind::Or: return eval_bool(b->a, state) || eval_bool(b->b, state);
      case BoolExpr::Kind::Cmp: {
        Rational l = eval_expr(b->lhs, state);
        Rational r = eval_expr(b->rhs, state);
        switch (b->op) {
          case CmpOp::Eq: return l == r;
          case CmpOp::Ne: return l != r;
          case CmpOp::Lt: return l < r;
          case CmpOp::Gt: return l > r;
          case CmpOp::Le: return l <= r;
          case CmpOp::Ge: return l >= r;
        }
      }
    }
    fail(ErrorCode::Internal, "unreachable condition kind");
  }

  const Program& p_;
  const EnumOptions& opts_;
};

}  // namespace

ExactDistribution exact_enumerate(const Program& p, std::uint64_t n, const EnumOptions& opts) {
  return Enumerator(p, opts).run(n);
}

ExactDistribution exact_enumerate(const NormalizedProgram& p, std::uint64_t n,
                                  const EnumOptions& opts) {
  Program view = p.as_program();
  return exact_enumerate(view, n, opts);
}

// ---------------------------------------------------------------------------
// Counter-based sampling
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in [0,1) keyed by (seed, sample, iteration, draw site).
double keyed_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t iteration,
                     std::uint64_t draw_id) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (sample + 0x100000001b3ull));
  h = splitmix64(h ^ (iteration + 0xd6e8feb86659fd93ull));
  h = splitmix64(h ^ (draw_id + 0xa0761d6478bd642full));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Acklam's rational approximation to the standard normal quantile.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  if (p <= 0) return -HUGE_VAL;
  if (p >= 1) return HUGE_VAL;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

template <typename Value>
struct ValueOps;

template <>
struct ValueOps<double> {
  static double from_rational(const Rational& r) { return rational_to_double(r); }
  static double pow(double base, unsigned e) { return std::pow(base, e); }
};

template <>
struct ValueOps<Rational> {
  static Rational from_rational(const Rational& r) { return r; }
  static Rational pow(const Rational& base, unsigned e) { return rational_pow(base, e); }
};

template <typename Value>
class Sampler {
 public:
  Sampler(const Program& p, const std::map<std::string, Rational>& bindings)
      : p_(p), bindings_(bindings) {}

  std::map<std::string, Value> run(std::uint64_t n, std::uint64_t seed, std::uint64_t sample) {
    seed_ = seed;
    sample_ = sample;
    iteration_ = 0;
    state_.clear();
    std::set<std::string> needed = pre_state_reads(p_);
    for (const auto& v : p_.variables) {
      std::string sym = init_value_symbol(p_.variables, p_.symbols, v);
      auto it = bindings_.find(sym);
      if (it != bindings_.end()) {
        state_[v] = ValueOps<Value>::from_rational(it->second);
      } else if (needed.count(v)) {
        fail(ErrorCode::ValidationError,
             "variable '" + v + "' is read before assignment; bind '" + sym + "'");
      } else {
        state_[v] = ValueOps<Value>::from_rational(Rational(0));
      }
    }
    exec(p_.init);
    for (std::uint64_t i = 1; i <= n; ++i) {
      iteration_ = i;
      if (!bool_is_true(p_.guard) && !eval_bool(p_.guard)) continue;
      exec(p_.body);
    }
    return state_;
  }

 private:
  void exec(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) exec_statement(s);
  }

  void exec_statement(const Statement& s) {
    if (s.is_if()) {
      const auto& f = s.if_stmt();
      for (const auto& br : f.branches) {
        if (eval_bool(br.cond)) {
          exec(br.body);
          return;
        }
      }
      exec(f.else_body);
      return;
    }
    const auto& a = s.assign();
    if (a.guard && !bool_is_true(a.guard) && !eval_bool(a.guard)) {
      const std::string& def = a.default_var.empty() ? a.targets[0] : a.default_var;
      state_[a.targets[0]] = state_.at(def);
      return;
    }
    std::vector<Value> values;
    values.reserve(a.values.size());
    for (const auto& rhs : a.values) values.push_back(eval_rhs(rhs));
    for (std::size_t i = 0; i < a.targets.size(); ++i) state_[a.targets[i]] = values[i];
  }

  Value eval_rhs(const Rhs& rhs) {
    if (rhs.is_categorical()) {
      const auto& cat = rhs.categorical();
      if (cat.options.size() == 1 && !cat.options[0].prob) {
        return eval_expr(cat.options[0].value);
      }
      double u = draw(cat.draw_id);
      std::vector<Scalar> probs = categorical_probs(cat, p_.variables);
      double cum = 0.0;
      for (std::size_t i = 0; i < cat.options.size(); ++i) {
        cum += rational_to_double(probs[i].evaluate(bindings_));
        if (u < cum || i + 1 == cat.options.size()) {
          return eval_expr(cat.options[i].value);
        }
      }
      return eval_expr(cat.options.back().value);
    }
    return eval_dist(rhs.dist());
  }

  Value eval_dist(const DistCall& d);

  double draw(unsigned draw_id) {
    return keyed_uniform(seed_, sample_, iteration_, draw_id);
  }

  double eval_expr_double(const ExprPtr& e) {
    if constexpr (std::is_same_v<Value, double>) {
      return eval_expr(e);
    } else {
      return rational_to_double(eval_expr(e));
    }
  }

  Value eval_expr(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Number: return ValueOps<Value>::from_rational(e->number);
      case Expr::Kind::Ident: {
        auto it = state_.find(e->ident);
        if (it != state_.end()) return it->second;
        auto bt = bindings_.find(e->ident);
        if (bt == bindings_.end()) {
          fail(ErrorCode::ValidationError,
               "unbound symbolic constant '" + e->ident + "' in simulation");
        }
        return ValueOps<Value>::from_rational(bt->second);
      }
      case Expr::Kind::Neg: return -eval_expr(e->lhs);
      case Expr::Kind::Pow: return ValueOps<Value>::pow(eval_expr(e->lhs), e->exponent);
      case Expr::Kind::Add: return eval_expr(e->lhs) + eval_expr(e->rhs);
      case Expr::Kind::Sub: return eval_expr(e->lhs) - eval_expr(e->rhs);
      case Expr::Kind::Mul: return eval_expr(e->lhs) * eval_expr(e->rhs);
      case Expr::Kind::Div: {
        Value den = eval_expr(e->rhs);
        return eval_expr(e->lhs) / den;
      }
    }
    fail(ErrorCode::Internal, "unreachable expression kind");
  }

  bool eval_bool(const BoolPtr& b) {
    switch (b->kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::Not: return !eval_bool(b->a);
      case BoolExpr::Kind::And: return eval_bool(b->a) && eval_bool(b->b);
      case BoolExpr::Kind::Or: return eval_bool(b->a) || eval_bool(b->b);
      case BoolExpr::Kind::Cmp: {
        Value l = eval_expr(b->lhs);
        Value r = eval_expr(b->rhs);
        switch (b->op) {
          case CmpOp::Eq: return l == r;
          case CmpOp::Ne: return l != r;
          case CmpOp::Lt: return l < r;
          case CmpOp::Gt: return l > r;
          case CmpOp::Le: return l <= r;
          case CmpOp::Ge: return l >= r;
        }
      }
    }
    fail(ErrorCode::Internal, "unreachable condition kind");
  }

  const Program& p_;
  const std::map<std::string, Rational>& bindings_;
  std::map<std::string, Value> state_;
  std::uint64_t seed_ = 0, sample_ = 0, iteration_ = 0;
};

template <>
double Sampler<double>::eval_dist(const DistCall& d) {
  double u = draw(d.draw_id);
  switch (d.kind) {
    case DistKind::Bernoulli: {
      double p = eval_expr_double(d.params[0]);
      return u < p ? 1.0 : 0.0;
    }
    case DistKind::Normal: {
      double mean = eval_expr_double(d.params[0]);
      double variance = eval_expr_double(d.params[1]);
      return mean + std::sqrt(variance) * inverse_normal_cdf(u);
    }
    case DistKind::Uniform: {
      double a = eval_expr_double(d.params[0]);
      double b = eval_expr_double(d.params[1]);
      return a + (b - a) * u;
    }
    case DistKind::Laplace: {
      double mean = eval_expr_double(d.params[0]);
      double scale = eval_expr_double(d.params[1]);
      double q = u - 0.5;
      double sgn = q >= 0 ? 1.0 : -1.0;
      return mean - scale * sgn * std::log(1.0 - 2.0 * std::fabs(q));
    }
    case DistKind::Exponential: {
      double rate = d.rate_over_poly
                        ? eval_expr_double(d.params[0]) / eval_expr_double(d.params[1])
                        : eval_expr_double(d.params[0]);
      return -std::log(1.0 - u) / rate;
    }
  }
  fail(ErrorCode::Internal, "unreachable distribution kind");
}

template <>
Rational Sampler<Rational>::eval_dist(const DistCall& d) {
  if (d.kind != DistKind::Bernoulli) {
    fail(ErrorCode::ContinuousDistribution,
         std::string("exact coupled simulation cannot draw from ") + dist_kind_name(d.kind));
  }
  double u = draw(d.draw_id);
  Rational p = eval_expr(d.params[0]);
  return u < rational_to_double(p) ? Rational(1) : Rational(0);
}

}  // namespace

SampleStats estimate_moment(const Program& p, const std::string& var, unsigned k,
                            std::uint64_t n, const SampleOptions& opts) {
  if (opts.samples < 30) {
    fail(ErrorCode::UsageError, "at least 30 samples required for a CI estimate");
  }
  if (!p.variables.count(var)) {
    fail(ErrorCode::UsageError, "unknown program variable '" + var + "'");
  }
  Sampler<double> sampler(p, opts.bindings);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < opts.samples; ++i) {
    auto state = sampler.run(n, opts.seed, i);
    double x = std::pow(state.at(var), static_cast<double>(k));
    double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  double variance = opts.samples > 1 ? m2 / static_cast<double>(opts.samples - 1) : 0.0;
  double halfwidth = 1.959963984540054 * std::sqrt(variance / static_cast<double>(opts.samples));
  return SampleStats{mean, halfwidth};
}

std::map<std::string, double> simulate_once(const Program& p, std::uint64_t n,
                                            std::uint64_t seed, std::uint64_t sample_index,
                                            const std::map<std::string, Rational>& bindings) {
  Sampler<double> sampler(p, bindings);
  return sampler.run(n, seed, sample_index);
}

std::map<std::string, Rational> simulate_once_exact(
    const Program& p, std::uint64_t n, std::uint64_t seed, std::uint64_t sample_index,
    const std::map<std::string, Rational>& bindings) {
  Sampler<Rational> sampler(p, bindings);
  return sampler.run(n, seed, sample_index);
}

const char* prng_name() { return "splitmix64-counter/keyed(seed,sample,iteration,site)"; }

}  // namespace momentforge

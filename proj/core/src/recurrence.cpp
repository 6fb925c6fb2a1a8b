#include "momentforge/recurrence.hpp"

#include <algorithm>
#include <queue>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/power_reduction.hpp"
#include "momentforge/printer.hpp"

namespace momentforge {

namespace {

// Post-state marker: '\x01' cannot appear in parsed identifiers.
std::string post_name(const std::string& v) { return "\x01" + v; }
bool is_post(const std::string& v) { return !v.empty() && v[0] == '\x01'; }
std::string strip_post(const std::string& v) { return is_post(v) ? v.substr(1) : v; }

constexpr std::size_t kMonomialCap = 20000;

}  // namespace

std::size_t RecurrenceSystem::index_of(const Monomial& m) const {
  auto it = index.find(m);
  if (it == index.end()) {
    fail(ErrorCode::Internal, "monomial not in system: " + monomial_to_string(m));
  }
  return it->second;
}

Scalar dist_raw_moment(const DistCall& d, const std::set<std::string>& variables, unsigned k) {
  if (k == 0) return Scalar(Rational(1));
  auto param = [&](std::size_t i) { return expr_to_scalar(d.params[i], variables); };
  switch (d.kind) {
    case DistKind::Bernoulli:
      return param(0);
    case DistKind::Uniform: {
      Scalar a = param(0), b = param(1);
      if (!a.is_zero() || !(b == Scalar(Rational(1)))) {
        fail(ErrorCode::UnsupportedDistribution,
             "Uniform moments require the normalized form Uniform(0,1)");
      }
      return Scalar(Rational(1, static_cast<long>(k) + 1));
    }
    case DistKind::Normal: {
      Scalar mean = param(0), variance = param(1);
      if (!mean.is_zero()) {
        fail(ErrorCode::UnsupportedDistribution,
             "Normal moments require the normalized form Normal(0,v)");
      }
      if (k % 2 == 1) return Scalar(Rational(0));
      return Scalar(rational_double_factorial(k - 1)) * variance.pow(k / 2);
    }
    case DistKind::Laplace: {
      Scalar mean = param(0), scale = param(1);
      if (!mean.is_zero()) {
        fail(ErrorCode::UnsupportedDistribution,
             "Laplace moments require the normalized form Laplace(0,b)");
      }
      if (k % 2 == 1) return Scalar(Rational(0));
      return Scalar(rational_factorial(k)) * scale.pow(k);
    }
    case DistKind::Exponential: {
      if (d.rate_over_poly) {
        fail(ErrorCode::UnsupportedDistribution,
             "Exponential moments require a constant rate");
      }
      Scalar rate = param(0);
      if (rate.is_zero()) fail(ErrorCode::UnsupportedDistribution, "Exponential rate is zero");
      return Scalar(rational_factorial(k)) / rate.pow(k);
    }
  }
  fail(ErrorCode::Internal, "unreachable distribution kind");
}

std::string init_value_symbol(const NormalizedProgram& p, const std::string& var) {
  std::string name = var + "0";
  while (p.variables.count(name) || p.symbols.count(name)) name += "_";
  return name;
}

RecurrenceBuilder::RecurrenceBuilder(const NormalizedProgram& p, const TypeEnv& types,
                                     const VarOrder& order)
    : p_(p), types_(types), order_(order) {
  for (const auto& g : p_.body) body_assigned_.insert(g.target);
  for (const auto& g : p_.init) init_assigned_.insert(g.target);
  marked_types_ = types_;
  marked_vars_ = p_.variables;
  for (const auto& v : p_.variables) {
    auto it = types_.find(v);
    if (it != types_.end()) marked_types_[post_name(v)] = it->second;
    marked_vars_.insert(post_name(v));
  }
}

VarPoly RecurrenceBuilder::reduce(const VarPoly& poly) const {
  return reduce_finite_powers(poly, marked_types_);
}

// Replace post(target)^k per the assignment's kind: a guarded categorical
// becomes [C]*sum p_i a_i^k + [not C]*d^k and a guarded draw becomes
// [C]*E(Dist^k) + [not C]*d^k, with reads classified pre/post by position.
VarPoly RecurrenceBuilder::substitute_assignment(
    const VarPoly& poly, const GuardedAssign& g,
    const std::map<std::string, std::string>& earlier_marks) const {
  const std::string marked_target = post_name(g.target);
  bool occurs = false;
  for (const auto& [mono, coeff] : poly.terms()) {
    if (mono.count(marked_target)) {
      occurs = true;
      break;
    }
  }
  if (!occurs) return poly;

  // Indicator of the guard at this program point (cached per power usage).
  bool trivial_guard = bool_is_true(g.guard);
  VarPoly guard_ind;
  if (!trivial_guard) {
    BoolPtr classified = bool_rename(g.guard, earlier_marks);
    guard_ind = indicator_poly(classified, marked_types_, marked_vars_);
  }
  auto default_read = [&]() {
    auto it = earlier_marks.find(g.default_var);
    return VarPoly::variable(it == earlier_marks.end() ? g.default_var : it->second);
  };

  // Value polynomial per power: sum p_i a_i^k or the factored draw moment.
  auto value_poly = [&](unsigned k) -> VarPoly {
    if (g.rhs.is_categorical()) {
      const auto& cat = g.rhs.categorical();
      std::vector<Scalar> probs = categorical_probs(cat, p_.variables);
      VarPoly sum;
      for (std::size_t i = 0; i < cat.options.size(); ++i) {
        ExprPtr renamed = expr_rename(cat.options[i].value, earlier_marks);
        VarPoly a = expr_to_varpoly(renamed, marked_vars_);
        sum = sum + reduce(a.pow(k)).scaled(probs[i]);
      }
      return sum;
    }
    return VarPoly::constant(dist_raw_moment(g.rhs.dist(), p_.variables, k));
  };

  VarPoly out;
  std::map<unsigned, VarPoly> cache;
  for (const auto& [mono, coeff] : poly.terms()) {
    auto it = mono.find(marked_target);
    if (it == mono.end()) {
      out.add_term(mono, coeff);
      continue;
    }
    unsigned k = it->second;
    Monomial rest = mono;
    rest.erase(marked_target);

    VarPoly piece;
    auto cached = cache.find(k);
    if (cached != cache.end()) {
      piece = cached->second;
    } else {
      VarPoly value = value_poly(k);
      if (trivial_guard) {
        piece = value;
      } else {
        VarPoly dflt = reduce(default_read().pow(k));
        VarPoly not_guard = VarPoly::constant(Scalar(Rational(1))) - guard_ind;
        piece = reduce(guard_ind * value + not_guard * dflt);
      }
      cache.emplace(k, piece);
    }
    out = out + reduce(piece * VarPoly::monomial(rest, coeff));
  }
  return out;
}

VarPoly RecurrenceBuilder::row_polynomial(const Monomial& m) const {
  // Start from the monomial at time n+1: body-assigned variables are post.
  Monomial start;
  for (const auto& [v, e] : m) {
    start[body_assigned_.count(v) ? post_name(v) : v] = e;
  }
  VarPoly poly = VarPoly::monomial(start, Scalar(Rational(1)));

  // Walk the body bottom-up. Reads inside statement i are post for variables
  // assigned strictly before i, pre otherwise.
  std::map<std::string, std::string> earlier_marks;
  std::vector<std::map<std::string, std::string>> marks_at(p_.body.size());
  for (std::size_t i = 0; i < p_.body.size(); ++i) {
    marks_at[i] = earlier_marks;
    earlier_marks[p_.body[i].target] = post_name(p_.body[i].target);
  }
  for (std::size_t i = p_.body.size(); i > 0; --i) {
    poly = substitute_assignment(poly, p_.body[i - 1], marks_at[i - 1]);
  }

  for (const auto& [mono, coeff] : poly.terms()) {
    for (const auto& [v, e] : mono) {
      if (is_post(v)) {
        fail(ErrorCode::Internal,
             "unsubstituted post-state variable '" + strip_post(v) + "' in recurrence row");
      }
    }
  }
  return poly;
}

Scalar RecurrenceBuilder::initial_moment(const Monomial& m) const {
  Monomial start;
  for (const auto& [v, e] : m) {
    start[init_assigned_.count(v) ? post_name(v) : v] = e;
  }
  VarPoly poly = VarPoly::monomial(start, Scalar(Rational(1)));

  std::map<std::string, std::string> earlier_marks;
  std::vector<std::map<std::string, std::string>> marks_at(p_.init.size());
  for (std::size_t i = 0; i < p_.init.size(); ++i) {
    marks_at[i] = earlier_marks;
    earlier_marks[p_.init[i].target] = post_name(p_.init[i].target);
  }
  for (std::size_t i = p_.init.size(); i > 0; --i) {
    poly = substitute_assignment(poly, p_.init[i - 1], marks_at[i - 1]);
  }

  // Whatever remains was never assigned in the init block: its initial value
  // is a symbolic constant.
  std::map<std::string, Scalar> binding;
  for (const auto& v : poly.vars()) {
    if (is_post(v)) {
      fail(ErrorCode::Internal, "unsubstituted post-state variable in initial moment");
    }
    binding[v] = Scalar::symbol(init_value_symbol(p_, v));
  }
  return poly.evaluate(binding);
}

RecurrenceSystem RecurrenceBuilder::build(const std::vector<VarPoly>& goals,
                                          std::vector<GoalCombo>* goal_combos) {
  RecurrenceSystem sys;

  struct QueueEntry {
    MonomialKey key;
    std::size_t seq;
    Monomial mono;
  };
  auto cmp = [](const QueueEntry& a, const QueueEntry& b) {
    int c = key_compare(a.key, b.key);
    if (c != 0) return c < 0;          // max-heap on key
    return a.seq > b.seq;              // FIFO among equal keys
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(cmp)> queue(cmp);
  std::set<Monomial> enqueued;
  std::size_t seq = 0;

  auto enqueue = [&](const Monomial& m) {
    if (enqueued.insert(m).second) {
      queue.push(QueueEntry{monomial_key(m, order_, types_), seq++, m});
      if (enqueued.size() > kMonomialCap) {
        fail(ErrorCode::Internal, "monomial closure exceeds cap");
      }
    }
  };

  if (goal_combos) goal_combos->clear();
  for (const auto& goal : goals) {
    VarPoly reduced = reduce_finite_powers(goal, types_);
    GoalCombo combo;
    for (const auto& [mono, coeff] : reduced.terms()) {
      combo[mono] = coeff;
      enqueue(mono);
    }
    if (goal_combos) goal_combos->push_back(std::move(combo));
  }
  enqueue(Monomial{});  // E(1)

  std::vector<std::map<Monomial, Scalar>> rows;
  while (!queue.empty()) {
    QueueEntry entry = queue.top();
    queue.pop();
    VarPoly row = row_polynomial(entry.mono);
    std::map<Monomial, Scalar> row_map;
    for (const auto& [mono, coeff] : row.terms()) {
      MonomialKey nk = monomial_key(mono, order_, types_);
      if (key_compare(nk, entry.key) > 0) {
        fail(ErrorCode::OrderingViolation,
             "recurrence of " + monomial_to_string(entry.mono) + " produced larger monomial " +
                 monomial_to_string(mono));
      }
      row_map[mono] = coeff;
      enqueue(mono);
    }
    sys.monomials.push_back(entry.mono);
    sys.keys.push_back(entry.key);
    rows.push_back(std::move(row_map));
  }

  sys.matrix.assign(sys.size(), std::vector<Scalar>(sys.size(), Scalar(Rational(0))));
  for (std::size_t i = 0; i < sys.size(); ++i) sys.index[sys.monomials[i]] = i;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    for (const auto& [mono, coeff] : rows[i]) {
      sys.matrix[i][sys.index_of(mono)] = coeff;
    }
  }
  sys.initials.reserve(sys.size());
  for (const auto& m : sys.monomials) sys.initials.push_back(initial_moment(m));

  // Keys must be non-increasing down the list (block-lower-triangular shape).
  for (std::size_t i = 0; i + 1 < sys.size(); ++i) {
    if (key_compare(sys.keys[i], sys.keys[i + 1]) < 0) {
      fail(ErrorCode::OrderingViolation, "system monomials are not sorted by key");
    }
  }
  return sys;
}

std::vector<Scalar> forward_eval(const RecurrenceSystem& s, std::uint64_t n) {
  std::vector<Scalar> v = s.initials;
  for (std::uint64_t step = 0; step < n; ++step) {
    std::vector<Scalar> next(s.size(), Scalar(Rational(0)));
    for (std::size_t i = 0; i < s.size(); ++i) {
      Scalar acc(Rational(0));
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.matrix[i][j].is_zero()) continue;
        acc += s.matrix[i][j] * v[j];
      }
      next[i] = acc;
    }
    v = std::move(next);
  }
  return v;
}

std::vector<std::vector<Scalar>> forward_eval_sequence(const RecurrenceSystem& s,
                                                       std::uint64_t n) {
  std::vector<std::vector<Scalar>> out;
  out.reserve(n + 1);
  std::vector<Scalar> v = s.initials;
  out.push_back(v);
  for (std::uint64_t step = 0; step < n; ++step) {
    std::vector<Scalar> next(s.size(), Scalar(Rational(0)));
    for (std::size_t i = 0; i < s.size(); ++i) {
      Scalar acc(Rational(0));
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.matrix[i][j].is_zero()) continue;
        acc += s.matrix[i][j] * v[j];
      }
      next[i] = acc;
    }
    v = std::move(next);
    out.push_back(v);
  }
  return out;
}

Scalar eval_combo(const GoalCombo& combo, const RecurrenceSystem& s,
                  const std::vector<Scalar>& state) {
  Scalar out(Rational(0));
  for (const auto& [mono, coeff] : combo) {
    out += coeff * state[s.index_of(mono)];
  }
  return out;
}

}  // namespace momentforge

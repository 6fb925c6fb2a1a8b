#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "momentforge/ast.hpp"
#include "momentforge/dependency.hpp"
#include "momentforge/finiteness.hpp"
#include "momentforge/varpoly.hpp"

namespace momentforge {

// Linear recurrence system over expected monomials:
//   E(M_i at n+1) = sum_j matrix[i][j] * E(M_j at n),  E(M_j at 0) = initials[j].
// Monomials are listed in descending key order (ties in discovery order), so
// the matrix is block-lower-triangular with blocks = key-equivalence classes.
// The constant monomial 1 is always present.
struct RecurrenceSystem {
  std::vector<Monomial> monomials;
  std::vector<MonomialKey> keys;
  std::vector<std::vector<Scalar>> matrix;
  std::vector<Scalar> initials;
  std::map<Monomial, std::size_t> index;

  std::size_t size() const { return monomials.size(); }
  std::size_t index_of(const Monomial& m) const;
};

// Linear combination over system monomials representing a goal polynomial.
using GoalCombo = std::map<Monomial, Scalar>;

// Raw moment E(Dist^k) for a distribution call with constant parameters in
// table-normal form (Bernoulli(p), Normal(0,v), Uniform(0,1), Laplace(0,b),
// Exponential(c)).
Scalar dist_raw_moment(const DistCall& d, const std::set<std::string>& variables, unsigned k);

// Symbol standing for the initial value of a variable the init block leaves
// unset. Matches the convention used by type inference.
std::string init_value_symbol(const NormalizedProgram& p, const std::string& var);

class RecurrenceBuilder {
 public:
  RecurrenceBuilder(const NormalizedProgram& p, const TypeEnv& types, const VarOrder& order);

  // Closed system covering every goal polynomial; goal_combos[i] expresses
  // goals[i] over the system's monomials (after finite-power reduction).
  RecurrenceSystem build(const std::vector<VarPoly>& goals,
                         std::vector<GoalCombo>* goal_combos = nullptr);

  // E(M at 0) for a single monomial, through the init block.
  Scalar initial_moment(const Monomial& m) const;

 private:
  VarPoly row_polynomial(const Monomial& m) const;
  VarPoly substitute_assignment(const VarPoly& poly, const GuardedAssign& g,
                                const std::map<std::string, std::string>& earlier_marks) const;
  VarPoly reduce(const VarPoly& poly) const;

  const NormalizedProgram& p_;
  const TypeEnv& types_;
  const VarOrder& order_;
  TypeEnv marked_types_;                 // includes marked (post) copies
  std::set<std::string> marked_vars_;    // all names incl. marked
  std::set<std::string> body_assigned_;
  std::set<std::string> init_assigned_;
};

// n exact matrix-vector products from the initial moments.
std::vector<Scalar> forward_eval(const RecurrenceSystem& s, std::uint64_t n);
// All state vectors 0..n (cheaper than repeated forward_eval calls).
std::vector<std::vector<Scalar>> forward_eval_sequence(const RecurrenceSystem& s,
                                                       std::uint64_t n);

Scalar eval_combo(const GoalCombo& combo, const RecurrenceSystem& s,
                  const std::vector<Scalar>& state);

}  // namespace momentforge

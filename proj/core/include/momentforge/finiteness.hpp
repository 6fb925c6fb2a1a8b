#pragma once

#include <map>
#include <optional>
#include <vector>

#include "momentforge/ast.hpp"
#include "momentforge/scalar.hpp"

namespace momentforge {

// Abstract value of a program variable: a finite set of field elements or
// "anything". Finite sets keep canonical, pairwise provably-distinct elements
// (pairwise differences are nonzero rationals); sets that grow beyond the
// cardinality cap or contain unseparable symbolic values widen to infinite.
struct ValueSet {
  bool infinite = false;
  std::vector<Scalar> values;  // sorted canonically, no duplicates

  static ValueSet top() { return ValueSet{true, {}}; }
  static ValueSet single(const Scalar& v) { return ValueSet{false, {v}}; }

  bool is_finite() const { return !infinite; }
  std::size_t size() const { return values.size(); }
  bool contains(const Scalar& v) const;

  bool operator==(const ValueSet& o) const {
    return infinite == o.infinite && values == o.values;
  }
};

using TypeEnv = std::map<std::string, ValueSet>;

inline constexpr std::size_t kValueSetCap = 32;

// Join (set union) with widening past the cap and on unseparable elements.
ValueSet value_set_union(const ValueSet& a, const ValueSet& b);

// Finite-set fixpoint over the loop body starting from the init block.
// The resulting sets cover every value a variable can take at any iteration
// (including time 0). Works on surface programs and on normalized programs
// via as_program().
TypeEnv infer_types(const Program& p);
TypeEnv infer_types(const NormalizedProgram& p);

// Support of a finite variable, error when infinite.
const std::vector<Scalar>& finite_support(const TypeEnv& env, const std::string& var);

}  // namespace momentforge

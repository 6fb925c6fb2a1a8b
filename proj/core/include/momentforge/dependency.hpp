#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "momentforge/ast.hpp"
#include "momentforge/finiteness.hpp"
#include "momentforge/varpoly.hpp"

namespace momentforge {

// Labeled variable dependencies: target depends on source.
struct DepEdge {
  bool conditional = false;
  bool finite = false;
  bool linear = false;
  bool polynomial = false;

  void merge(const DepEdge& o) {
    conditional |= o.conditional;
    finite |= o.finite;
    linear |= o.linear;
    polynomial |= o.polynomial;
  }
  bool any() const { return conditional || finite || linear || polynomial; }
};

struct DepGraph {
  // depends[y][x]: y depends on x (with labels).
  std::map<std::string, std::map<std::string, DepEdge>> depends;
  // Transitive closure with polynomial promotion.
  std::map<std::string, std::map<std::string, bool>> reaches;  // value: poly-reach

  bool depends_on(const std::string& y, const std::string& x) const;
  bool depends_poly_on(const std::string& y, const std::string& x) const;
  // Variables y transitively depends on (its dependency cone), including y.
  std::set<std::string> ancestors(const std::string& y) const;
};

// Variable order: equivalence classes of mutually dependent variables,
// linearized so that class(x) precedes class(y) whenever y depends on x.
// Ties are broken by first-assignment order in the program.
struct VarOrder {
  std::vector<std::vector<std::string>> classes;      // ascending
  std::map<std::string, std::size_t> class_of;
  std::vector<std::size_t> nonfinite_classes;         // ascending class ids
  std::map<std::size_t, std::size_t> nonfinite_slot;  // class id -> key position
};

// Per-class degrees of the non-finite classes, compared reverse-
// lexicographically (last position most significant).
using MonomialKey = std::vector<unsigned>;

enum class Ordering { Less, Equivalent, Greater };

struct Verdict {
  bool accepted = true;
  int condition = 0;  // 1 = polynomial self-dependency, 2 = non-finite condition variable
  std::vector<std::string> witness_cycle;    // condition 1
  std::string witness_condition;             // condition 2 (rendered condition)
  std::string witness_variable;              // condition 2
};

// Dependency graph per the five dependency kinds, with transitive closure.
// Works on surface programs (if-conditions contribute conditional edges for
// all assignments in their scope) and on normalized programs via as_program()
// (guards contribute the conditional edges).
DepGraph build_dependencies(const Program& p, const TypeEnv& types);
DepGraph build_dependencies(const NormalizedProgram& p, const TypeEnv& types);

// Moment-computability: rejects polynomial self-dependencies of non-finite
// variables and non-finite variables inside conditions.
Verdict check_computability(const DepGraph& g, const Program& p, const TypeEnv& types);
Verdict check_computability(const DepGraph& g, const NormalizedProgram& p, const TypeEnv& types);

// Restriction of the check to the dependency cone of `goal_var`; violations
// outside the cone do not block the goal.
Verdict check_computability_for_goal(const DepGraph& g, const Program& p, const TypeEnv& types,
                                     const std::string& goal_var);

VarOrder build_var_order(const DepGraph& g, const Program& p, const TypeEnv& types);
VarOrder build_var_order(const DepGraph& g, const NormalizedProgram& p, const TypeEnv& types);

MonomialKey monomial_key(const Monomial& m, const VarOrder& order, const TypeEnv& types);
Ordering monomial_compare(const Monomial& a, const Monomial& b, const VarOrder& order,
                          const TypeEnv& types);
// Reverse-lexicographic comparison of key vectors.
int key_compare(const MonomialKey& a, const MonomialKey& b);

}  // namespace momentforge

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momentforge/charpoly.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/exppoly.hpp"
#include "momentforge/recurrence.hpp"

namespace momentforge {

struct BlockFailure {
  std::vector<Monomial> monomials;
  ErrorCode code = ErrorCode::Internal;
  std::string reason;
};

// Closed forms per monomial; blocks the field restriction cannot express are
// reported as typed failures while the rest of the system still solves.
// Exact forward evaluation of the system remains available regardless.
struct SolveResult {
  std::map<Monomial, ExpPoly> solved;
  std::vector<BlockFailure> failures;

  bool complete() const { return failures.empty(); }
  bool has(const Monomial& m) const { return solved.count(m) > 0; }
  const ExpPoly& closed_form(const Monomial& m) const;
  // Linear combination of solved monomials as one exponential polynomial.
  ExpPoly combo_closed_form(const GoalCombo& combo) const;
};

// Solves the system bottom-up over the strongly-connected components of its
// coefficient graph (a refinement of the key blocks). Per component:
// characteristic polynomial, exact root factorization, then an ansatz over
// component roots and forcing bases fitted to exact forward values and
// verified against five extra terms. Pointwise corrections absorb the
// nilpotent transient (n below the system dimension).
SolveResult solve(const RecurrenceSystem& s);

}  // namespace momentforge

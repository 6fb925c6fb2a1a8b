#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momentforge/analysis.hpp"
#include "momentforge/ast.hpp"
#include "momentforge/dependency.hpp"
#include "momentforge/finiteness.hpp"
#include "momentforge/normalizer.hpp"
#include "momentforge/recurrence.hpp"
#include "momentforge/solver.hpp"

namespace momentforge {

struct PipelineOptions {
  // Replace non-finite if-conditions by fresh Bernoulli draws with symbolic
  // probabilities (independence assumptions checked conservatively).
  bool approx_infinite_conditions = false;
  // Proceed on unverifiable assumptions (they are reported as warnings).
  bool force_approx = false;
};

struct InfiniteConditionInfo {
  std::string condition;   // rendered original sub-condition I
  std::string symbol;      // probability symbol standing for P(I)
  std::string fresh_var;   // introduced Bernoulli variable
  std::vector<std::string> unverified;  // assumptions that could not be checked
};

// Applies the infinite-condition approximation to every if-site whose
// condition mentions a non-finite variable. Throws AssumptionUnverified
// unless `force`.
std::pair<Program, std::vector<InfiniteConditionInfo>> approximate_infinite_conditions(
    const Program& p, bool force);

// Everything the analyses need, computed once per program.
struct Analysis {
  Program source;       // as parsed
  Program analyzed;     // folded + guard-encoded + optional approximation
  BoolPtr loop_guard;   // recorded phi for guarded loops (null when trivial)
  NormalizedProgram normalized;
  TypeEnv types;        // on the normalized program
  DepGraph deps;        // on the normalized program
  VarOrder order;
  std::vector<InfiniteConditionInfo> rewrites;
};

Analysis analyze_program(const Program& p, const PipelineOptions& opts = {});

struct GoalSpec {
  std::string var;
  unsigned k = 1;
};

struct MomentComputation {
  RecurrenceSystem system;
  std::vector<GoalCombo> combos;        // per goal
  SolveResult solution;
  std::vector<std::optional<ExpPoly>> closed_forms;  // per goal
  std::vector<std::string> failures;                 // reason per missing form
};

// Builds one shared recurrence system covering all goals and solves it.
// Throws Error (with a witness message) when the computability check rejects
// a goal's dependency cone.
MomentComputation compute_moments(const Analysis& a, const std::vector<GoalSpec>& goals);

// Raw moments 0..max_order of one variable (entry 0 is the constant 1).
MomentVector moment_vector(const Analysis& a, const std::string& var, unsigned max_order);

struct TerminationMoment {
  Surd value;
  ExpPoly conditional_numerator;    // closed form of E(x^k [not phi])
  ExpPoly conditional_denominator;  // closed form of E([not phi])
};

// After-termination moment of a guarded loop via the limit of the
// conditional-moment ratio.
TerminationMoment termination_moment(const Analysis& a, const std::string& var, unsigned k);

// Distribution of a finite variable recovered from its first |support|-1
// moments; support taken from type inference.
RecoveredDistribution recover_variable_distribution(const Analysis& a, const std::string& var);

}  // namespace momentforge

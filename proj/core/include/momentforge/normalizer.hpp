#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momentforge/ast.hpp"

namespace momentforge {

enum class TransformKind { Simultaneous, Distribution, Else, If, Multi };

// Locator of a rewrite site. Each step names a statement index; inner steps
// additionally pick a branch to descend into (branch >= 0) or the else body
// (branch == kElseBranch). The final step has branch == kNoBranch.
struct Site {
  static constexpr int kNoBranch = -1;
  static constexpr int kElseBranch = -2;

  bool in_init = false;
  struct Step {
    unsigned stmt = 0;
    int branch = kNoBranch;
  };
  std::vector<Step> steps;
};

// Termination measure (simultaneous, distributions, elses, weighted if
// assignments, multi-assigned body vars, multi-assigned init vars); every
// transformation strictly decreases it lexicographically.
using Measure = std::array<unsigned long long, 6>;

Measure program_measure(const Program& p);

// `else if` chains into nested if/else; drops degenerate empty ifs.
Program desugar_else_if(const Program& p);

// Inline init-only variables bound once to a constant expression into every
// later use (the defining assignment is kept so the name stays a variable).
// Distribution parameters like Bernoulli(p) with p set once in the init block
// become plain constants this way.
Program fold_init_constants(const Program& p);

// while phi: body  ->  while true: if phi: body end, recording phi.
// Identity for trivially-true guards.
Program encode_guard(const Program& p, BoolPtr* recorded_guard = nullptr);

// Single transformation step at an explicit site; throws NotApplicable when
// the site does not match the transformation's schema.
Program apply_transformation(TransformKind kind, const Program& p, const Site& site);

// First applicable site for the given kind in deterministic order, if any.
std::optional<Site> find_site(TransformKind kind, const Program& p);

// Exhaustive normalization: applies transformations in the fixed priority
// simultaneous, distribution, else, if (outermost first), multi until none
// applies. Asserts the termination measure decreases at every step.
NormalizedProgram normalize(const Program& p);

}  // namespace momentforge

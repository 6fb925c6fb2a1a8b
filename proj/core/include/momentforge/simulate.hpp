#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "momentforge/ast.hpp"
#include "momentforge/varpoly.hpp"

namespace momentforge {

// Symbol for the initial value of a variable the init block leaves unset.
std::string init_value_symbol(const std::set<std::string>& variables,
                              const std::set<std::string>& symbols, const std::string& var);

// ---------------------------------------------------------------------------
// Exact enumeration (discrete programs)
// ---------------------------------------------------------------------------

struct EnumOptions {
  std::map<std::string, Rational> bindings;  // symbolic constants -> values
  std::size_t state_cap = 1000000;
};

struct ExactDistribution {
  std::vector<std::string> vars;                      // sorted
  std::map<std::vector<Rational>, Rational> states;   // joint distribution

  Rational total_probability() const;
  Rational moment(const std::string& var, unsigned k) const;
  Rational moment(const Monomial& m) const;
  // Marginal over a subset of the variables.
  ExactDistribution project(const std::set<std::string>& keep) const;

  bool operator==(const ExactDistribution& o) const {
    return vars == o.vars && states == o.states;
  }
};

// Joint distribution after n full iterations by breadth-first expansion with
// exact probability arithmetic. Throws ContinuousDistribution for draws with
// infinite support and StateExplosion past the cap.
ExactDistribution exact_enumerate(const Program& p, std::uint64_t n, const EnumOptions& opts);
ExactDistribution exact_enumerate(const NormalizedProgram& p, std::uint64_t n,
                                  const EnumOptions& opts);

// ---------------------------------------------------------------------------
// Seeded Monte Carlo
// ---------------------------------------------------------------------------
//
// Randomness is a counter-based splitmix64 stream keyed by (seed, sample,
// iteration, draw site); identical keys give identical draws, so the original
// program and its normal form can be run coupled for preservation checks.

struct SampleOptions {
  std::map<std::string, Rational> bindings;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
};

struct SampleStats {
  double mean = 0.0;
  double halfwidth = 0.0;  // 0.95 normal-approximation CI half width
};

// Sample mean and CI of x_n^k.
SampleStats estimate_moment(const Program& p, const std::string& var, unsigned k,
                            std::uint64_t n, const SampleOptions& opts);

// One coupled trajectory: the full state after n iterations.
std::map<std::string, double> simulate_once(const Program& p, std::uint64_t n,
                                            std::uint64_t seed, std::uint64_t sample_index,
                                            const std::map<std::string, Rational>& bindings);

// Exact-arithmetic coupled trajectory; requires categorical/Bernoulli-only
// randomness (throws ContinuousDistribution otherwise).
std::map<std::string, Rational> simulate_once_exact(
    const Program& p, std::uint64_t n, std::uint64_t seed, std::uint64_t sample_index,
    const std::map<std::string, Rational>& bindings);

const char* prng_name();  // documented generator id for output metadata

}  // namespace momentforge

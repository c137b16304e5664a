#pragma once

#include <cstdint>
#include <vector>

#include "mnl/policies.hpp"

// Numerical lower bounds on the decision-estimation coefficient of a
// randomized assortment policy, and the closed-form upper bounds the two
// strategy constructors guarantee.

namespace mnl {

struct DecSearchConfig {
  double grid_step = 0.05;  // lattice spacing in grid mode
  int grid_max_items = 4;   // grid mode guard; larger N falls back to sampling
  long long samples = 1000000;  // candidate count in sampling mode
  std::uint64_t seed = 1;
  // Coordinate-ascent refinement of the best candidate (grid and sampling
  // modes only): up to `polish_sweeps` passes, step halving from `polish_step`
  // after each pass without improvement, floored at `polish_step_min`.
  bool polish = true;
  int polish_sweeps = 20;
  double polish_step = 0.05;
  double polish_step_min = 1e-4;
  // When set, only these value vectors are evaluated (no polish), which pins
  // the search set for hand-computed examples and monotonicity checks.
  const std::vector<Vec>* candidates = nullptr;
};

struct DecEstimate {
  double value = 0.0;      // best inner objective found (a lower bound)
  Assortment witness_set;  // maximizing comparator assortment at witness_v
  Vec witness_v;           // maximizing value vector among explored candidates
  long long budget_used = 0;  // inner-objective evaluations
};

// Lower bound on the decision-estimation coefficient
//   max_{v* in [0,1]^N} max_{S*} { R(S*,v*,r) - E_{S~q}[R(S,v*,r)]
//                                  - gamma * E_{S~q}[ |mu(S,v)-mu(S,v*)|_2^2 ] }
// by maximizing over an explicit candidate list, a full lattice (N <=
// grid_max_items), or uniform samples, each followed by the optional polish.
// The exact maximum over the continuous box is not attempted. Deterministic
// per seed.
DecEstimate dec_estimate(const AssortmentDistribution& q, const Vec& v, const Vec& r,
                         double gamma, int capacity, const DecSearchConfig& cfg = {});

// Closed-form coefficient bounds guaranteed by the strategy constructors:
//   eps_greedy:  16NK/(gamma*eps) + 2K/gamma + eps   (any gamma > 0, eps in (0,1])
//   log_barrier: 3N(K+1)^4/gamma                     (q solved at the same gamma)
double dec_bounds(StrategyKind kind, int n_items, int capacity, double gamma,
                  double eps = -1.0);

}  // namespace mnl

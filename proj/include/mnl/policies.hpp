#pragma once

#include <cstdint>
#include <vector>

#include "mnl/assortment.hpp"
#include "mnl/core.hpp"
#include "mnl/oracles.hpp"
#include "mnl/rng.hpp"
#include "mnl/sim.hpp"

namespace mnl {

// Probability distribution over assortments (the randomized policy for one
// round). Support members are valid, distinct assortments; probabilities are
// nonnegative and sum to 1.
struct AssortmentDistribution {
  std::vector<Assortment> support;
  Vec probs;
};

void validate_distribution(const AssortmentDistribution& q, int n_items);

// w_i(q): probability that item i is in the offered set. Entry i-1 is item i.
Vec item_marginals(const AssortmentDistribution& q, int n_items);

int sample_index(const AssortmentDistribution& q, Rng& rng);

enum class StrategyKind { eps_greedy, log_barrier };

// Doubling epoch schedule: tau_m = 2^(m-1) - 1; epoch m fits on rounds
// [tau_{m-1}+1, tau_m] (empty for m=1) and plays rounds [tau_m+1, tau_{m+1}]
// (clamped to the horizon). eps/gamma are the exploration parameters derived
// from the error curve at the fit size, with the m=1 values taken from the
// m=2 formula.
struct EpochPlan {
  int m = 1;
  long long fit_begin = 1, fit_end = 0;
  long long play_begin = 1, play_end = 1;
  double eps = 1.0;
  double gamma = 1.0;
};

EpochPlan epoch_plan(int m, long long horizon, const ErrModel& err);

// Mass 1-eps on the greedy assortment, eps/N on each singleton; duplicates
// merged, zero-mass entries dropped.
AssortmentDistribution eps_greedy_dist(const Vec& v_hat, const Vec& r, double eps,
                                       int capacity);

struct BarrierSolverConfig {
  long long max_sweeps = 0;    // 0: use 50 * (number of assortments)
  double tol = 1e-10;          // stop when a sweep improves the objective less
  double kkt_tol = 0.0;        // > 0: converge on duality gap instead (objective
                               // comparisons flatten out near sqrt(ulp); the gap
                               // keeps resolving down to ulp scale)
  double barrier_scale = 1.0;  // scales the barrier weight; a test hook
  int guard_items = 12;
  int guard_capacity = 4;
  const Vec* init = nullptr;   // optional warm start over the enumeration
};

struct BarrierResult {
  AssortmentDistribution dist;
  bool converged = false;
  double kkt_residual = 0.0;  // duality gap of the final iterate
  double objective = 0.0;
  long long sweeps = 0;
};

// Approximately maximizes E_{S~rho}[R(S, v_hat, r)] - ((K+1)^4/gamma) *
// sum_i log(1/w_i(rho)) over distributions on all assortments of size <=
// capacity, by entropic mirror ascent in log space. Support is the full
// enumeration; every item marginal stays strictly positive.
BarrierResult log_barrier_dist(const Vec& v_hat, const Vec& r, double gamma, int capacity,
                               const BarrierSolverConfig& cfg = {});

// Posterior over a finite member set, kept as unnormalized log weights.
struct FgtsPosterior {
  Vec log_weights;
  double eta = 1.0;

  static FgtsPosterior uniform(int size, double eta);
  Vec weights() const;
};

double fgts_default_eta(int n_items, int capacity, int class_size, double horizon);

// Loss estimator: squared choice-probability error over the offered items
// scaled by 1/(8*eta*K), minus the best reward achievable under the sampled
// model (the optimism bonus). The no-purchase index is excluded from the sum.
double fgts_loss(const ChoiceDistribution& mu, int purchase, double max_reward_under_f,
                 double eta, int capacity);

void fgts_update(FgtsPosterior& p, const Vec& losses);

struct OracleConfig {
  double err_constant = 1.0;  // scales the error curve driving eps_m/gamma_m
  // Fixed exploration parameters overriding the epoch schedule when >= 0
  // (test hooks; used for matched-parameter comparisons).
  double fixed_eps = -1.0;
  double fixed_gamma = -1.0;
};

// Epoch-based runner: refits the offline oracle (ERM) at each epoch boundary
// on the previous epoch's tuples and plays the strategy distribution built
// from the refit model and the epoch's exploration parameter.
Trace run_alg1(const StochasticEnv& env, StrategyKind strategy, long long horizon,
               std::uint64_t seed, const OracleConfig& cfg = {});

// Per-round runner against a scripted stream: the online oracle (Hedge for a
// finite class, online gradient descent for a linear class) predicts before
// each round and is fed the observed tuple afterwards. eps/gamma <= 0 select
// the theory tunings from the error curve with constant 1.
Trace run_alg2(const AdversarialEnv& env, StrategyKind strategy, long long horizon,
               std::uint64_t seed, double gamma = -1.0, double eps = -1.0);

// Posterior-sampling runner over a finite member set (a linear class is
// discretized to a theta grid first: axis_points per dimension, dims <= 3).
Trace run_fgts(const StochasticEnv& env, long long horizon, std::uint64_t seed,
               double eta = -1.0, int axis_points = 9);

}  // namespace mnl

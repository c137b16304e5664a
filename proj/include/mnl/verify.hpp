#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Property suites behind the verify-lemmas command. Each suite draws random
// instances, checks one quantitative inequality or identity with a pinned
// tolerance, and reports the worst margin seen. A margin is bound minus value,
// so pass means worst_margin >= -tolerance.

namespace mnl {

struct SuiteResult {
  std::string name;
  bool pass = false;
  long long checks = 0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  std::string detail;  // one-line account of the most adverse instance
};

// |R(S,v,r) - R(S,v',r)| <= sum_{i in S} |v_i - v'_i| + 1e-9,
// random instances with N <= 10, K <= 5.
SuiteResult check_reward_lipschitz(long long n, std::uint64_t seed);

// (1/(2(K+1)^4)) sum_{i in S}(v_i - v*_i)^2 <= ||mu(S,v) - mu(S,v*)||_2^2
// <= 2 KL(mu(S,v*) || mu(S,v)) + 1e-9, random instances with N <= 10, K <= 5.
SuiteResult check_choice_sandwich(long long n, std::uint64_t seed);

// For h(a) = a / (1 + 1'a) on [0,1]^d, d <= 8:
// ||h(a) - h(b)||_2^2 >= ||a - b||_2^2 / (2(d+1)^4) - 1e-9.
SuiteResult check_h_jacobian_bound(long long n, std::uint64_t seed);

// E_{i ~ mu(S,v*)}[ exp(-(l_log(mu(S,v),i) - l_log(mu(S,v*),i))) ] = 1
// within 1e-10.
SuiteResult check_one_central(long long n, std::uint64_t seed);

// Normalization to 1e-12 and no-purchase dominance of choice_distribution.
SuiteResult check_choice_axioms(long long n, std::uint64_t seed);

// best_assortment_fast value matches best_assortment_bruteforce within 1e-9
// on random instances with N <= 12, K in {1..5}.
SuiteResult check_solver_equivalence(long long n, std::uint64_t seed);

// |linear_logloss_gradient| <= 2 + 1e-9 on random evaluations.
SuiteResult check_gradient_bound(long long n, std::uint64_t seed);

// Gradient agrees with central finite differences of the composed log loss
// within 1e-6.
SuiteResult check_gradient_fd(long long n, std::uint64_t seed);

// Log loss is convex along random chords of the parameter ball (1e-9 slack).
SuiteResult check_loss_convexity(long long n, std::uint64_t seed);

// Solved log-barrier distributions on random (v, r) fixtures, N <= 8,
// K <= 3, gamma cycling {10, 100, 1000}:
//   low regret:  max_S R - E_q[R] <= 1.01 * N (K+1)^4 / gamma,
//   dispersion:  sum_{i in S} 1/w_i <= 1.01 * (N + gamma/(K+1)^4 * gap(S))
//                for every enumerated S.
SuiteResult check_barrier_low_regret(long long n, std::uint64_t seed);
SuiteResult check_barrier_dispersion(long long n, std::uint64_t seed);

// Test of the dispersion test: halving the barrier weight must break the
// dispersion bound on at least one fixture (passes when a violation appears).
SuiteResult check_barrier_mutation(long long n, std::uint64_t seed);

// One decision-coefficient fixture: the strategy distribution, its estimated
// coefficient, and the closed-form bound it must stay under.
struct DecCheckRow {
  int fixture = 0;
  std::string kind;   // "eps-greedy" or "log-barrier"
  int n_items = 0;
  int capacity = 0;
  double gamma = 0.0;
  double eps = -1.0;  // -1 on log-barrier rows
  double estimate = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - estimate
};

// Random (v, r, gamma, eps) fixtures with N <= 4, K <= 2, alternating the two
// strategies, gamma scaled so the bound is informative (< 1). Throws
// SolverError if a barrier solve fails to converge.
std::vector<DecCheckRow> dec_check_rows(long long n, std::uint64_t seed);

// Estimated decision coefficient vs the strategy's closed-form bound over
// dec_check_rows: estimate <= bound + 1e-6.
SuiteResult check_dec_soundness(long long n, std::uint64_t seed);

}  // namespace mnl

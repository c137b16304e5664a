#include <doctest.h>

#include <cmath>

#include "mnl/assortment.hpp"
#include "mnl/dec.hpp"
#include "mnl/errors.hpp"
#include "mnl/verify.hpp"

using namespace mnl;

TEST_CASE("dec_estimate is exactly zero at the model itself for a greedy point mass") {
  const Vec v = (Vec(3) << 0.7, 0.4, 0.9).finished();
  const Vec r = (Vec(3) << 0.6, 0.9, 0.3).finished();
  AssortmentDistribution q;
  q.support = {best_assortment_fast(v, r, 2).assortment};
  q.probs = Vec::Constant(1, 1.0);

  const std::vector<Vec> only_v{v};
  DecSearchConfig cfg;
  cfg.candidates = &only_v;
  for (double gamma : {0.0, 1.0, 50.0}) {
    const DecEstimate est = dec_estimate(q, v, r, gamma, 2, cfg);
    CHECK(est.value == 0.0);
    CHECK(est.witness_set == q.support[0]);
    CHECK(est.budget_used == 1);
  }
}

TEST_CASE("dec_estimate two-point hand values at gamma = 0") {
  // Uniform over the singletons of a two-item instance with v = r = (1,1).
  const Vec ones = Vec::Constant(2, 1.0);
  AssortmentDistribution q;
  q.support = {Assortment({1}), Assortment({2})};
  q.probs = Vec::Constant(2, 0.5);

  SUBCASE("at v* = v the policy has zero regret") {
    const std::vector<Vec> only_v{ones};
    DecSearchConfig cfg;
    cfg.candidates = &only_v;
    const DecEstimate est = dec_estimate(q, ones, ones, 0.0, 1, cfg);
    CHECK(est.value == 0.0);
  }
  SUBCASE("the grid finds the lopsided maximizer") {
    // max over v* of max_i v*_i/(1+v*_i) - mean_i v*_i/(1+v*_i) is 1/4,
    // attained at v* = (1,0) or (0,1).
    const DecEstimate est = dec_estimate(q, ones, ones, 0.0, 1);
    CHECK(est.value == doctest::Approx(0.25).epsilon(1e-12));
    const double hi = std::max(est.witness_v(0), est.witness_v(1));
    const double lo = std::min(est.witness_v(0), est.witness_v(1));
    CHECK(hi == 1.0);
    CHECK(lo == 0.0);
  }
}

TEST_CASE("dec_estimate is non-increasing in gamma on a fixed candidate set") {
  Rng rng = Rng::seeded(301);
  const int n = 3;
  const Vec v = (Vec(3) << 0.3, 0.8, 0.5).finished();
  const Vec r = (Vec(3) << 0.9, 0.2, 0.7).finished();
  const auto q = eps_greedy_dist(v, r, 0.4, 2);

  std::vector<Vec> candidates;
  for (int k = 0; k < 60; ++k) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p(i) = rng.uniform(0.0, 1.0);
    candidates.push_back(p);
  }
  DecSearchConfig cfg;
  cfg.candidates = &candidates;

  double prev = 1e300;
  for (double gamma : {0.0, 0.3, 1.0, 4.0, 20.0, 200.0}) {
    const double val = dec_estimate(q, v, r, gamma, 2, cfg).value;
    CHECK(val <= prev + 1e-12);
    prev = val;
  }
}

TEST_CASE("dec_estimate witnesses reproduce the reported value") {
  Rng rng = Rng::seeded(302);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.uniform_int(4);  // 2..5 exercises grid and sampling
    const int k = 1 + rng.uniform_int(std::min(2, n));
    Vec v(n), r(n);
    for (int i = 0; i < n; ++i) {
      v(i) = rng.uniform(0.0, 1.0);
      r(i) = rng.uniform(0.0, 1.0);
    }
    const double gamma = std::pow(10.0, rng.uniform(0.0, 2.0));
    const auto q = eps_greedy_dist(v, r, rng.uniform(0.1, 0.9), k);

    DecSearchConfig cfg;
    cfg.samples = 2000;
    cfg.grid_step = 0.25;
    cfg.seed = 3000 + static_cast<std::uint64_t>(trial);
    const DecEstimate est = dec_estimate(q, v, r, gamma, k, cfg);

    double mean_reward = 0.0, penalty = 0.0;
    for (size_t s = 0; s < q.support.size(); ++s) {
      const double p = q.probs(static_cast<int>(s));
      mean_reward += p * expected_reward(q.support[s], est.witness_v, r);
      const auto mu_hat = choice_distribution(q.support[s], v);
      const auto mu_star = choice_distribution(q.support[s], est.witness_v);
      penalty += p * (mu_hat.probs - mu_star.probs).squaredNorm();
    }
    const double replay = expected_reward(est.witness_set, est.witness_v, r) -
                          mean_reward - gamma * penalty;
    CHECK(est.value == doctest::Approx(replay).epsilon(1e-10));
    CHECK(est.budget_used > 0);

    // Determinism in sampling mode.
    if (n > 4) {
      const DecEstimate again = dec_estimate(q, v, r, gamma, k, cfg);
      CHECK(again.value == est.value);
      CHECK(again.witness_v == est.witness_v);
    }
  }
}

TEST_CASE("dec_bounds closed forms and monotonicity") {
  CHECK(dec_bounds(StrategyKind::log_barrier, 2, 1, 96.0) == 1.0);
  CHECK(dec_bounds(StrategyKind::eps_greedy, 2, 1, 64.0, 0.5) == 1.53125);

  double prev_lb = 1e300, prev_eps = 1e300;
  for (double gamma : {10.0, 20.0, 80.0, 500.0}) {
    const double lb = dec_bounds(StrategyKind::log_barrier, 3, 2, gamma);
    const double eg = dec_bounds(StrategyKind::eps_greedy, 3, 2, gamma, 0.3);
    CHECK(lb < prev_lb);
    CHECK(eg < prev_eps);
    prev_lb = lb;
    prev_eps = eg;
  }

  CHECK_THROWS_AS(dec_bounds(StrategyKind::eps_greedy, 2, 1, 64.0), ValidationError);
  CHECK_THROWS_AS(dec_bounds(StrategyKind::eps_greedy, 2, 1, 64.0, 1.5), ValidationError);
  CHECK_THROWS_AS(dec_bounds(StrategyKind::log_barrier, 2, 1, 0.0), ValidationError);
}

TEST_CASE("dec soundness suite holds at module scale") {
  const SuiteResult res = check_dec_soundness(12, 303);
  INFO(res.detail);
  CHECK(res.pass);
  CHECK(res.worst_margin >= -res.tolerance);
}

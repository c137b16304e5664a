#include <doctest.h>

#include <cmath>

#include "mnl/core.hpp"
#include "mnl/verify.hpp"

using namespace mnl;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("choice_distribution matches the hand-evaluated formula") {
  // Single unit-value item: symmetric split with no-purchase.
  auto mu = choice_distribution(Assortment({1}), vec({1.0}));
  CHECK(mu.probs(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mu.probs(1) == doctest::Approx(0.5).epsilon(1e-15));

  // Zero valuations put all mass on no-purchase.
  mu = choice_distribution(Assortment({1, 2}), vec({0.0, 0.0, 0.7}));
  CHECK(mu.probs(0) == 1.0);
  CHECK(mu.probs(1) == 0.0);
  CHECK(mu.probs(2) == 0.0);

  // v = (0.5, 0.25): denominator 7/4, so (4/7, 2/7, 1/7).
  mu = choice_distribution(Assortment({1, 2}), vec({0.5, 0.25}));
  CHECK(mu.probs(0) == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
  CHECK(mu.probs(1) == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(mu.probs(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("choice_distribution validates inputs") {
  CHECK_THROWS_AS(choice_distribution(Assortment(std::vector<int>{}), vec({0.5})), ValidationError);
  CHECK_THROWS_AS(choice_distribution(Assortment({2}), vec({0.5})), ValidationError);
  CHECK_THROWS_AS(choice_distribution(Assortment({0}), vec({0.5})), ValidationError);
  CHECK_THROWS_AS(choice_distribution(Assortment({1, 1}), vec({0.5, 0.5})), ValidationError);
  CHECK_THROWS_AS(choice_distribution(Assortment({1}), vec({1.5})), ValidationError);
  CHECK_THROWS_AS(choice_distribution(Assortment({1}), vec({-0.1})), ValidationError);
}

TEST_CASE("expected_reward matches hand evaluation") {
  CHECK(expected_reward(Assortment({1}), vec({1.0}), vec({1.0})) == doctest::Approx(0.5));
  CHECK(expected_reward(Assortment({1, 3}), vec({0.3, 0.9, 0.8}), vec({0.0, 0.0, 0.0})) == 0.0);
  CHECK(expected_reward(Assortment({1, 2}), vec({1.0, 1.0}), vec({1.0, 0.0})) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("sample_purchase is faithful and replayable") {
  // Zero valuation: never purchased.
  Rng rng = Rng::seeded(7);
  for (int t = 0; t < 100; ++t)
    CHECK(sample_purchase(Assortment({1}), vec({0.0}), rng) == 0);

  // Unit valuation: empirical frequency of item 1 near 1/2.
  rng = Rng::seeded(202608);
  long long hits = 0;
  const long long draws = 1000000;
  for (long long t = 0; t < draws; ++t)
    hits += sample_purchase(Assortment({1}), vec({1.0}), rng) == 1;
  const double freq = static_cast<double>(hits) / static_cast<double>(draws);
  CHECK(std::abs(freq - 0.5) < 0.002);

  // Replaying the stream state reproduces the sequence exactly.
  Rng a = Rng::seeded(99), b = Rng::seeded(99);
  const Assortment S({1, 2, 3});
  const Vec v = vec({0.9, 0.4, 0.2});
  for (int t = 0; t < 1000; ++t)
    CHECK(sample_purchase(S, v, a) == sample_purchase(S, v, b));
}

TEST_CASE("log_loss closed forms and zero guard") {
  const auto certain = choice_distribution(Assortment({1, 2}), vec({0.0, 0.0}));
  CHECK(log_loss(certain, 0) == 0.0);

  const auto half = choice_distribution(Assortment({1}), vec({1.0}));
  CHECK(log_loss(half, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const auto mu = choice_distribution(Assortment({1, 2}), vec({0.5, 0.25}));
  CHECK(log_loss(mu, 2) == doctest::Approx(-std::log(1.0 / 7.0)).epsilon(1e-15));

  CHECK_THROWS_AS(log_loss(certain, 1), DomainError);
  CHECK_THROWS_AS(log_loss(mu, 3), DomainError);
}

TEST_CASE("kl_divergence values and guards") {
  const auto mu = choice_distribution(Assortment({2}), vec({0.3, 0.6}));
  CHECK(kl_divergence(mu, mu) == doctest::Approx(0.0));

  // (0.5,0.5) vs (0.25,0.75) two-outcome divergence, summed by hand.
  ChoiceDistribution p, q;
  p.set = q.set = Assortment({1});
  p.probs = vec({0.5, 0.5});
  q.probs = vec({0.25, 0.75});
  const double expect = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  CHECK(kl_divergence(p, q) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.143841).epsilon(1e-5));

  ChoiceDistribution other = q;
  other.set = Assortment({2});
  CHECK_THROWS_AS(kl_divergence(p, other), DomainError);

  // Pinsker: KL >= 0.5 * (l1 distance)^2 on random pairs.
  Rng rng = Rng::seeded(5);
  for (int t = 0; t < 20000; ++t) {
    const Assortment S({1, 2, 3});
    Vec a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = rng.uniform(1e-3, 1.0);
      b(i) = rng.uniform(1e-3, 1.0);
    }
    const auto ma = choice_distribution(S, a);
    const auto mb = choice_distribution(S, b);
    const double l1 = (ma.probs - mb.probs).lpNorm<1>();
    CHECK(kl_divergence(ma, mb) >= 0.5 * l1 * l1 - 1e-12);
  }
}

TEST_CASE("choice_sq_distance hand values") {
  const Assortment S({1});
  CHECK(choice_sq_distance(S, vec({0.4}), vec({0.4})) == 0.0);
  // v=1 gives (0.5,0.5); v*=0 gives (1,0); squared distance 0.5.
  CHECK(choice_sq_distance(S, vec({1.0}), vec({0.0})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("core property suites pass at full sample counts") {
  auto r = check_choice_axioms(100000, 11);
  INFO(r.detail);
  CHECK(r.pass);

  r = check_reward_lipschitz(100000, 12);
  INFO(r.detail);
  CHECK(r.pass);

  r = check_choice_sandwich(100000, 13);
  INFO(r.detail);
  CHECK(r.pass);

  r = check_h_jacobian_bound(100000, 14);
  INFO(r.detail);
  CHECK(r.pass);

  r = check_one_central(10000, 15);
  INFO(r.detail);
  CHECK(r.pass);
}

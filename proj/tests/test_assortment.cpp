#include <doctest.h>

#include "mnl/assortment.hpp"
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

TEST_CASE("enumerate_assortments counts and guard") {
  CHECK(enumerate_assortments(3, 2).size() == 6);   // 3 singletons + 3 pairs
  CHECK(enumerate_assortments(4, 4).size() == 15);  // 2^4 - 1
  CHECK(enumerate_assortments(5, 9).size() == 31);  // capacity clamps at N
  CHECK_THROWS_AS(enumerate_assortments(21, 2), CapacityError);
}

TEST_CASE("best_assortment_bruteforce hand instances") {
  auto sol = best_assortment_bruteforce(vec({1, 1, 1}), vec({0.9, 0.5, 0.1}), 1);
  CHECK(sol.assortment.items == std::vector<int>{1});
  CHECK(sol.value == doctest::Approx(0.45).epsilon(1e-15));

  // All-zero rewards tie every subset at 0; lexicographic tie-break gives {1}.
  sol = best_assortment_bruteforce(vec({0.3, 0.8, 0.5}), vec({0, 0, 0}), 2);
  CHECK(sol.assortment.items == std::vector<int>{1});
  CHECK(sol.value == 0.0);

  sol = best_assortment_bruteforce(vec({1, 0.5, 0.25}), vec({0.2, 1.0, 1.0}), 2);
  CHECK(sol.assortment.items == std::vector<int>{2, 3});
  CHECK(sol.value == doctest::Approx(0.75 / 1.75).epsilon(1e-15));

  CHECK_THROWS_AS(best_assortment_bruteforce(Vec::Zero(21), Vec::Zero(21), 2),
                  CapacityError);
}

TEST_CASE("best_assortment_fast hand instances") {
  auto sol = best_assortment_fast(vec({0.4}), vec({0.7}), 1);
  CHECK(sol.assortment.items == std::vector<int>{1});

  // Unit values and rewards: every item helps, value 3/4.
  sol = best_assortment_fast(vec({1, 1, 1}), vec({1, 1, 1}), 3);
  CHECK(sol.assortment.items == std::vector<int>{1, 2, 3});
  CHECK(sol.value == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("fast solver matches brute force on 10^4 random instances") {
  const auto res = check_solver_equivalence(10000, 21);
  INFO(res.detail);
  CHECK(res.pass);
}

TEST_CASE("returned solutions certify optimality against random alternatives") {
  Rng rng = Rng::seeded(31);
  for (int t = 0; t < 200; ++t) {
    const int N = 2 + rng.uniform_int(11);
    const int K = 1 + rng.uniform_int(5);
    Vec v(N), r(N);
    for (int i = 0; i < N; ++i) {
      v(i) = rng.next_double();
      r(i) = rng.next_double();
    }
    const auto sol = best_assortment_fast(v, r, K);
    CHECK(sol.value == doctest::Approx(expected_reward(sol.assortment, v, r)).epsilon(1e-12));
    for (int a = 0; a < 100; ++a) {
      const int size = 1 + rng.uniform_int(std::min(K, N));
      std::vector<int> pool(N);
      for (int i = 0; i < N; ++i) pool[i] = i + 1;
      for (int i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.uniform_int(N - i)]);
      std::vector<int> items(pool.begin(), pool.begin() + size);
      std::sort(items.begin(), items.end());
      CHECK(sol.value >= expected_reward(Assortment(items), v, r) - 1e-9);
    }
  }
}

TEST_CASE("solvers are deterministic") {
  Rng rng = Rng::seeded(41);
  Vec v(8), r(8);
  for (int i = 0; i < 8; ++i) {
    v(i) = rng.next_double();
    r(i) = rng.next_double();
  }
  const auto a = best_assortment_fast(v, r, 3);
  const auto b = best_assortment_fast(v, r, 3);
  CHECK(a.assortment.items == b.assortment.items);
  CHECK(a.value == b.value);
}

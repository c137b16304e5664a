#pragma once

#include <vector>

#include "mnl/core.hpp"

namespace mnl {

struct AssortmentSolution {
  Assortment assortment;
  double value = 0.0;
};

// All assortments of size 1..capacity over {1..n_items}, size-major then
// lexicographic. Guard trips when n_items exceeds max_items.
std::vector<Assortment> enumerate_assortments(int n_items, int capacity,
                                              int max_items = 20);

// Exact maximizer of R(S,v,r) by enumeration; ties broken by the
// lexicographically smallest item list. Requires N <= 20.
AssortmentSolution best_assortment_bruteforce(const Vec& v, const Vec& r, int capacity);

// Same maximum through threshold search on lambda: R(S,v,r) >= lambda iff
// sum_{i in S} (r_i - lambda) v_i >= lambda, and for fixed lambda the best S
// keeps the top-<=K items with positive (r_i - lambda) v_i. Iterating
// lambda <- R(S_lambda) climbs to the fixed point lambda* = max_S R in a few
// O(N log N) rounds. The assortment may differ from brute force only among
// exact value ties.
AssortmentSolution best_assortment_fast(const Vec& v, const Vec& r, int capacity);

}  // namespace mnl

#include "mnl/assortment.hpp"

#include <algorithm>
#include <string>

namespace mnl {

namespace {

void visit_combinations(int n_items, int size, std::vector<int>& scratch,
                        int next, std::vector<Assortment>& out) {
  if (static_cast<int>(scratch.size()) == size) {
    out.emplace_back(scratch);
    return;
  }
  for (int item = next; item <= n_items; ++item) {
    scratch.push_back(item);
    visit_combinations(n_items, size, scratch, item + 1, out);
    scratch.pop_back();
  }
}

}  // namespace

std::vector<Assortment> enumerate_assortments(int n_items, int capacity, int max_items) {
  if (n_items < 1) throw ValidationError("enumerate_assortments: no items");
  if (capacity < 1) throw ValidationError("enumerate_assortments: capacity < 1");
  if (n_items > max_items)
    throw CapacityError("enumerate_assortments: N = " + std::to_string(n_items) +
                        " exceeds the exact-enumeration guard " + std::to_string(max_items));
  std::vector<Assortment> out;
  std::vector<int> scratch;
  const int top = std::min(capacity, n_items);
  for (int size = 1; size <= top; ++size) visit_combinations(n_items, size, scratch, 1, out);
  return out;
}

AssortmentSolution best_assortment_bruteforce(const Vec& v, const Vec& r, int capacity) {
  validate_unit_range(v, "value vector");
  validate_unit_range(r, "reward vector");
  const int n = static_cast<int>(v.size());
  AssortmentSolution best;
  best.value = -1.0;
  for (const Assortment& S : enumerate_assortments(n, capacity)) {
    const double val = expected_reward(S, v, r);
    if (val > best.value ||
        (val == best.value && S.items < best.assortment.items)) {
      best.assortment = S;
      best.value = val;
    }
  }
  return best;
}

AssortmentSolution best_assortment_fast(const Vec& v, const Vec& r, int capacity) {
  validate_unit_range(v, "value vector");
  validate_unit_range(r, "reward vector");
  const int n = static_cast<int>(v.size());
  if (n < 1) throw ValidationError("best_assortment_fast: no items");
  if (capacity < 1) throw ValidationError("best_assortment_fast: capacity < 1");
  const int cap = std::min(capacity, n);

  // Best assortment at threshold lambda: top-<=cap items by positive gain
  // (r_i - lambda) v_i, gain ties broken toward the smaller index.
  std::vector<int> order(n);
  const auto select_at = [&](double lambda) {
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ga = (r(a) - lambda) * v(a);
      const double gb = (r(b) - lambda) * v(b);
      if (ga != gb) return ga > gb;
      return a < b;
    });
    std::vector<int> items;
    for (int k = 0; k < cap; ++k) {
      const int i = order[k];
      if ((r(i) - lambda) * v(i) > 0.0) items.push_back(i + 1);
    }
    if (items.empty()) items.push_back(order[0] + 1);
    std::sort(items.begin(), items.end());
    return Assortment(items);
  };

  AssortmentSolution cur;
  cur.assortment = select_at(0.0);
  cur.value = expected_reward(cur.assortment, v, r);
  for (int iter = 0; iter < 200; ++iter) {
    const Assortment S = select_at(cur.value);
    const double val = expected_reward(S, v, r);
    if (!(val > cur.value)) break;
    cur.assortment = S;
    cur.value = val;
  }
  return cur;
}

}  // namespace mnl

#include "mnl/core.hpp"

#include <cmath>
#include <string>

namespace mnl {

bool Assortment::contains(int item) const {
  for (int i : items)
    if (i == item) return true;
  return false;
}

double ChoiceDistribution::prob_of(int outcome) const {
  if (outcome == 0) return probs(0);
  for (int k = 0; k < set.size(); ++k)
    if (set.items[k] == outcome) return probs(k + 1);
  throw DomainError("prob_of: outcome " + std::to_string(outcome) + " not in support");
}

void validate_unit_range(const Vec& v, const char* what) {
  for (int i = 0; i < v.size(); ++i) {
    const double x = v(i);
    if (!(x >= 0.0 && x <= 1.0))
      throw ValidationError(std::string(what) + ": entry " + std::to_string(i + 1) +
                            " = " + std::to_string(x) + " outside [0,1]");
  }
}

void validate_assortment(const Assortment& S, int n_items, int capacity) {
  if (S.items.empty()) throw ValidationError("assortment: empty");
  if (capacity >= 0 && S.size() > capacity)
    throw ValidationError("assortment: size " + std::to_string(S.size()) +
                          " exceeds capacity " + std::to_string(capacity));
  int prev = 0;
  for (int item : S.items) {
    if (item < 1 || item > n_items)
      throw ValidationError("assortment: item " + std::to_string(item) +
                            " outside [1," + std::to_string(n_items) + "]");
    if (item <= prev) throw ValidationError("assortment: items not strictly increasing");
    prev = item;
  }
}

ChoiceDistribution choice_distribution(const Assortment& S, const Vec& v) {
  validate_assortment(S, static_cast<int>(v.size()));
  validate_unit_range(v, "value vector");
  ChoiceDistribution mu;
  mu.set = S;
  mu.probs.resize(S.size() + 1);
  double denom = 1.0;
  for (int k = 0; k < S.size(); ++k) denom += v(S.items[k] - 1);
  mu.probs(0) = 1.0 / denom;
  for (int k = 0; k < S.size(); ++k) mu.probs(k + 1) = v(S.items[k] - 1) / denom;
  return mu;
}

double expected_reward(const Assortment& S, const Vec& v, const Vec& r) {
  validate_assortment(S, static_cast<int>(v.size()));
  validate_unit_range(v, "value vector");
  validate_unit_range(r, "reward vector");
  if (r.size() != v.size()) throw ValidationError("expected_reward: v and r sizes differ");
  double denom = 1.0, num = 0.0;
  for (int item : S.items) {
    denom += v(item - 1);
    num += r(item - 1) * v(item - 1);
  }
  return num / denom;
}

int sample_purchase(const Assortment& S, const Vec& v, Rng& rng) {
  const ChoiceDistribution mu = choice_distribution(S, v);
  const int k = rng.categorical(mu.probs);
  return k == 0 ? 0 : S.items[k - 1];
}

double log_loss(const ChoiceDistribution& mu, int outcome) {
  const double p = mu.prob_of(outcome);
  if (p <= 0.0)
    throw DomainError("log_loss: outcome " + std::to_string(outcome) +
                      " has zero probability");
  return -std::log(p);
}

double kl_divergence(const ChoiceDistribution& mu_star, const ChoiceDistribution& mu) {
  if (!(mu_star.set == mu.set)) throw DomainError("kl_divergence: supports differ");
  double kl = 0.0;
  for (int k = 0; k < mu_star.probs.size(); ++k) {
    const double p = mu_star.probs(k);
    if (p == 0.0) continue;
    const double q = mu.probs(k);
    if (q <= 0.0) throw DomainError("kl_divergence: zero entry under positive mass");
    kl += p * std::log(p / q);
  }
  return kl;
}

double choice_sq_distance(const Assortment& S, const Vec& v, const Vec& v_star) {
  const ChoiceDistribution a = choice_distribution(S, v);
  const ChoiceDistribution b = choice_distribution(S, v_star);
  return (a.probs - b.probs).squaredNorm();
}

}  // namespace mnl

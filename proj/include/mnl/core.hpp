#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mnl/errors.hpp"
#include "mnl/rng.hpp"

// Multinomial-logit choice primitives. Items are 1-based; index 0 is the
// no-purchase option with implicit valuation 1 and reward 0. A ValueVector or
// RewardVector is a length-N Eigen vector whose entry (i-1) belongs to item i,
// with every entry in [0,1].

namespace mnl {

using Vec = Eigen::VectorXd;

// Nonempty subset of {1..N}, strictly increasing, at most K items.
struct Assortment {
  std::vector<int> items;

  Assortment() = default;
  explicit Assortment(std::vector<int> ids) : items(std::move(ids)) {}

  int size() const { return static_cast<int>(items.size()); }
  bool contains(int item) const;
  bool operator==(const Assortment& other) const { return items == other.items; }
  bool operator<(const Assortment& other) const { return items < other.items; }
};

// Purchase probabilities over {0} ∪ S: probs(0) is no-purchase, probs(k) for
// k >= 1 belongs to set.items[k-1].
struct ChoiceDistribution {
  Assortment set;
  Vec probs;

  // Probability of outcome 0 or of an item in the assortment.
  double prob_of(int outcome) const;
};

// Throws ValidationError unless every entry of v lies in [0,1].
void validate_unit_range(const Vec& v, const char* what);

// Throws ValidationError unless S is a nonempty strictly increasing subset of
// {1..n_items} with at most capacity items (capacity < 0 skips the size cap).
void validate_assortment(const Assortment& S, int n_items, int capacity = -1);

// mu_i = v_i / (1 + sum_{j in S} v_j) for i in S, mu_0 = 1 / (1 + sum).
ChoiceDistribution choice_distribution(const Assortment& S, const Vec& v);

// R(S,v,r) = sum_{i in S} r_i v_i / (1 + sum_{i in S} v_i), always in [0,1].
double expected_reward(const Assortment& S, const Vec& v, const Vec& r);

// Draws a purchase outcome in {0} ∪ S distributed as choice_distribution(S,v).
int sample_purchase(const Assortment& S, const Vec& v, Rng& rng);

// -log mu_i; DomainError if the outcome has probability exactly zero or is
// outside the support.
double log_loss(const ChoiceDistribution& mu, int outcome);

// KL(mu_star || mu) = sum mu*_i log(mu*_i / mu_i) over the shared support.
// DomainError on support mismatch or a zero mu entry where mu_star is positive.
double kl_divergence(const ChoiceDistribution& mu_star, const ChoiceDistribution& mu);

// Squared Euclidean distance between choice distributions over {0} ∪ S.
double choice_sq_distance(const Assortment& S, const Vec& v, const Vec& v_star);

}  // namespace mnl

#include "mnl/dec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mnl/assortment.hpp"
#include "mnl/errors.hpp"

namespace mnl {

namespace {

// Inner objective evaluator with the penalty's reference distributions
// mu(S, v) precomputed once per support entry.
struct InnerObjective {
  const AssortmentDistribution& q;
  const Vec& r;
  double gamma;
  int capacity;
  std::vector<ChoiceDistribution> mu_ref;  // mu(S_s, v) per support entry
  mutable long long evals = 0;

  InnerObjective(const AssortmentDistribution& q_in, const Vec& v, const Vec& r_in,
                 double gamma_in, int capacity_in)
      : q(q_in), r(r_in), gamma(gamma_in), capacity(capacity_in) {
    mu_ref.reserve(q.support.size());
    for (const Assortment& s : q.support) mu_ref.push_back(choice_distribution(s, v));
  }

  // Value of the bracketed expression at v_star, maximized over S*.
  double eval(const Vec& v_star, Assortment* witness) const {
    ++evals;
    const AssortmentSolution best = best_assortment_fast(v_star, r, capacity);
    double mean_reward = 0.0;
    double penalty = 0.0;
    for (size_t s = 0; s < q.support.size(); ++s) {
      const double p = q.probs(static_cast<int>(s));
      mean_reward += p * expected_reward(q.support[s], v_star, r);
      if (gamma > 0.0) {
        const ChoiceDistribution mu_star = choice_distribution(q.support[s], v_star);
        penalty += p * (mu_ref[s].probs - mu_star.probs).squaredNorm();
      }
    }
    if (witness != nullptr) *witness = best.assortment;
    return best.value - mean_reward - gamma * penalty;
  }
};

}  // namespace

DecEstimate dec_estimate(const AssortmentDistribution& q, const Vec& v, const Vec& r,
                         double gamma, int capacity, const DecSearchConfig& cfg) {
  validate_distribution(q, static_cast<int>(v.size()));
  validate_unit_range(v, "valuation");
  validate_unit_range(r, "reward");
  if (gamma < 0.0) throw ValidationError("gamma must be nonnegative");
  if (capacity < 1) throw ValidationError("capacity must be >= 1");
  const int n = static_cast<int>(v.size());

  const InnerObjective obj(q, v, r, gamma, capacity);
  DecEstimate best;
  best.value = -std::numeric_limits<double>::infinity();

  const auto consider = [&](const Vec& v_star) {
    Assortment wit;
    const double val = obj.eval(v_star, &wit);
    if (val > best.value) {
      best.value = val;
      best.witness_set = std::move(wit);
      best.witness_v = v_star;
    }
  };

  bool explored_continuum = false;
  if (cfg.candidates != nullptr) {
    if (cfg.candidates->empty()) throw ValidationError("empty candidate list");
    for (const Vec& cand : *cfg.candidates) {
      if (cand.size() != n) throw ValidationError("candidate has wrong length");
      consider(cand);
    }
  } else if (n <= cfg.grid_max_items) {
    if (cfg.grid_step <= 0.0 || cfg.grid_step > 1.0)
      throw ValidationError("grid step must lie in (0,1]");
    const int per_axis = static_cast<int>(std::floor(1.0 / cfg.grid_step)) + 1;
    Vec point(n);
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;
    for (long long g = 0; g < total; ++g) {
      long long rest = g;
      for (int i = 0; i < n; ++i) {
        point(i) = std::min(1.0, (rest % per_axis) * cfg.grid_step);
        rest /= per_axis;
      }
      consider(point);
    }
    explored_continuum = true;
  } else {
    if (cfg.samples < 1) throw ValidationError("sampling mode needs samples >= 1");
    Rng rng = Rng::seeded(cfg.seed);
    Vec point(n);
    for (long long k = 0; k < cfg.samples; ++k) {
      for (int i = 0; i < n; ++i) point(i) = rng.uniform(0.0, 1.0);
      consider(point);
    }
    explored_continuum = true;
  }

  if (explored_continuum && cfg.polish) {
    double step = cfg.polish_step;
    for (int sweep = 0; sweep < cfg.polish_sweeps; ++sweep) {
      const double sweep_start = best.value;
      for (int i = 0; i < n; ++i) {
        for (const double dir : {step, -step}) {
          Vec probe = best.witness_v;
          const double cand = std::clamp(probe(i) + dir, 0.0, 1.0);
          if (cand == probe(i)) continue;
          probe(i) = cand;
          consider(probe);  // keeps the move only if it strictly improves
        }
      }
      if (best.value <= sweep_start) {
        if (step <= cfg.polish_step_min) break;
        step = std::max(step * 0.5, cfg.polish_step_min);
      }
    }
  }

  best.budget_used = obj.evals;
  return best;
}

double dec_bounds(StrategyKind kind, int n_items, int capacity, double gamma,
                  double eps) {
  if (n_items < 1) throw ValidationError("n_items must be >= 1");
  if (capacity < 1) throw ValidationError("capacity must be >= 1");
  if (gamma <= 0.0) throw ValidationError("gamma must be positive");
  if (kind == StrategyKind::eps_greedy) {
    if (eps <= 0.0 || eps > 1.0)
      throw ValidationError("eps_greedy bound needs eps in (0,1]");
    return 16.0 * n_items * capacity / (gamma * eps) + 2.0 * capacity / gamma + eps;
  }
  return 3.0 * n_items * std::pow(capacity + 1.0, 4) / gamma;
}

}  // namespace mnl

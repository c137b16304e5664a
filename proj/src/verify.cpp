#include "mnl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mnl/assortment.hpp"
#include "mnl/core.hpp"
#include "mnl/dec.hpp"
#include "mnl/errors.hpp"
#include "mnl/function_classes.hpp"
#include "mnl/oracles.hpp"
#include "mnl/policies.hpp"

namespace mnl {

namespace {

Vec random_unit_vec(int n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

Assortment random_assortment(int n_items, int capacity, Rng& rng) {
  const int size = 1 + rng.uniform_int(std::min(capacity, n_items));
  std::vector<int> pool(n_items);
  for (int i = 0; i < n_items; ++i) pool[i] = i + 1;
  for (int i = 0; i < size; ++i) {
    const int j = i + rng.uniform_int(n_items - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> items(pool.begin(), pool.begin() + size);
  std::sort(items.begin(), items.end());
  return Assortment(items);
}

std::string describe(int n, int k, const char* label, double x) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "N=%d K=%d %s=%.3e", n, k, label, x);
  return std::string(buf);
}

}  // namespace

SuiteResult check_reward_lipschitz(long long n, std::uint64_t seed) {
  SuiteResult res{"reward-lipschitz", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 2 + rng.uniform_int(9);
    const int K = 1 + rng.uniform_int(std::min(5, N));
    const Assortment S = random_assortment(N, K, rng);
    const Vec v = random_unit_vec(N, rng);
    const Vec v2 = random_unit_vec(N, rng);
    const Vec r = random_unit_vec(N, rng);
    double l1 = 0.0;
    for (int item : S.items) l1 += std::abs(v(item - 1) - v2(item - 1));
    const double gap = std::abs(expected_reward(S, v, r) - expected_reward(S, v2, r));
    const double margin = l1 - gap;
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(N, K, "margin", margin);
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_choice_sandwich(long long n, std::uint64_t seed) {
  SuiteResult res{"choice-distance-sandwich", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 2 + rng.uniform_int(9);
    const int K = 1 + rng.uniform_int(std::min(5, N));
    const Assortment S = random_assortment(N, K, rng);
    // Entries stay off exact zero so the KL side is finite.
    const Vec v = random_unit_vec(N, rng, 1e-6, 1.0);
    const Vec vs = random_unit_vec(N, rng, 1e-6, 1.0);
    double sq = 0.0;
    for (int item : S.items) {
      const double d = v(item - 1) - vs(item - 1);
      sq += d * d;
    }
    const double kp1 = static_cast<double>(K + 1);
    const double lower = sq / (2.0 * kp1 * kp1 * kp1 * kp1);
    const double dist = choice_sq_distance(S, v, vs);
    const double upper =
        2.0 * kl_divergence(choice_distribution(S, vs), choice_distribution(S, v));
    const double margin = std::min(dist - lower, upper - dist);
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(N, K, "margin", margin);
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_h_jacobian_bound(long long n, std::uint64_t seed) {
  SuiteResult res{"h-map-expansion", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int d = 1 + rng.uniform_int(8);
    const Vec a = random_unit_vec(d, rng);
    const Vec b = random_unit_vec(d, rng);
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i + 1;
    const Assortment S(all);
    const Vec ha = choice_distribution(S, a).probs.segment(1, d);
    const Vec hb = choice_distribution(S, b).probs.segment(1, d);
    const double dp1 = static_cast<double>(d + 1);
    const double lower = (a - b).squaredNorm() / (2.0 * dp1 * dp1 * dp1 * dp1);
    const double margin = (ha - hb).squaredNorm() - lower;
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "d=%d margin=%.3e", d, margin);
      res.detail = buf;
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_one_central(long long n, std::uint64_t seed) {
  SuiteResult res{"one-central-identity", true, n, 0.0, 1e-10, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 2 + rng.uniform_int(9);
    const int K = 1 + rng.uniform_int(std::min(5, N));
    const Assortment S = random_assortment(N, K, rng);
    // Model values stay above the finite-class floor so every log is finite.
    const Vec v = random_unit_vec(N, rng, 0.05, 1.0);
    const Vec vs = random_unit_vec(N, rng, 0.05, 1.0);
    const ChoiceDistribution mu = choice_distribution(S, v);
    const ChoiceDistribution mu_star = choice_distribution(S, vs);
    double e = mu_star.probs(0) * std::exp(-(log_loss(mu, 0) - log_loss(mu_star, 0)));
    for (int item : S.items) {
      e += mu_star.prob_of(item) *
           std::exp(-(log_loss(mu, item) - log_loss(mu_star, item)));
    }
    const double dev = std::abs(e - 1.0);
    if (dev > res.worst_margin) {
      res.worst_margin = dev;
      res.detail = describe(N, K, "|E-1|", dev);
    }
  }
  res.pass = res.worst_margin <= res.tolerance;
  return res;
}

SuiteResult check_choice_axioms(long long n, std::uint64_t seed) {
  SuiteResult res{"choice-axioms", true, n, 1e300, 1e-12, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 1 + rng.uniform_int(10);
    const int K = 1 + rng.uniform_int(std::min(5, N));
    const Assortment S = random_assortment(N, K, rng);
    const Vec v = random_unit_vec(N, rng);
    const ChoiceDistribution mu = choice_distribution(S, v);
    const double sum_dev = std::abs(mu.probs.sum() - 1.0);
    const double dominance = mu.probs(0) - mu.probs.tail(S.size()).maxCoeff();
    const double margin = std::min(res.tolerance - sum_dev, dominance + res.tolerance);
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(N, K, "margin", margin);
    }
  }
  res.pass = res.worst_margin >= 0.0;
  return res;
}

namespace {

struct LinearPoint {
  LinearClass cls;
  Mat x;
  Assortment S;
  int purchase = 0;
};

LinearPoint random_linear_point(Rng& rng) {
  LinearPoint p;
  p.cls.dim = 1 + rng.uniform_int(8);
  p.cls.bound = 1.0;
  p.cls.theta_star = Vec::Zero(p.cls.dim);
  const int N = 2 + rng.uniform_int(7);
  const int K = 1 + rng.uniform_int(std::min(4, N));
  p.x.resize(p.cls.dim, N);
  for (int i = 0; i < N; ++i) p.x.col(i) = random_ball_point(p.cls.dim, 1.0, rng);
  p.S = random_assortment(N, K, rng);
  const int pick = rng.uniform_int(p.S.size() + 1);
  p.purchase = pick == 0 ? 0 : p.S.items[pick - 1];
  return p;
}

double linear_point_loss(const LinearPoint& p, const Vec& theta) {
  return log_loss(choice_distribution(p.S, eval_linear(p.cls, theta, p.x)), p.purchase);
}

}  // namespace

SuiteResult check_gradient_bound(long long n, std::uint64_t seed) {
  SuiteResult res{"gradient-bound", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const LinearPoint p = random_linear_point(rng);
    const Vec theta = random_ball_point(p.cls.dim, p.cls.bound, rng);
    const double norm = linear_logloss_gradient(p.cls, theta, p.x, p.S, p.purchase).norm();
    const double margin = 2.0 - norm;
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(static_cast<int>(p.x.cols()), p.S.size(), "2-|g|", margin);
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_gradient_fd(long long n, std::uint64_t seed) {
  SuiteResult res{"gradient-finite-difference", true, n, 1e300, 1e-6, ""};
  res.worst_margin = 0.0;
  Rng rng = Rng::seeded(seed);
  const double h = 1e-5;
  for (long long t = 0; t < n; ++t) {
    const LinearPoint p = random_linear_point(rng);
    // Stay a finite-difference step inside the ball so shifted evals validate.
    const Vec theta = random_ball_point(p.cls.dim, p.cls.bound - 2.0 * h, rng);
    const Vec g = linear_logloss_gradient(p.cls, theta, p.x, p.S, p.purchase);
    double worst = 0.0;
    for (int j = 0; j < p.cls.dim; ++j) {
      Vec lo = theta, hi = theta;
      lo(j) -= h;
      hi(j) += h;
      const double fd = (linear_point_loss(p, hi) - linear_point_loss(p, lo)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g(j)));
    }
    if (worst > res.worst_margin) {
      res.worst_margin = worst;
      res.detail = describe(p.cls.dim, p.S.size(), "|fd-g|", worst);
    }
  }
  res.pass = res.worst_margin <= res.tolerance;
  return res;
}

SuiteResult check_loss_convexity(long long n, std::uint64_t seed) {
  SuiteResult res{"loss-convexity", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const LinearPoint p = random_linear_point(rng);
    const Vec t1 = random_ball_point(p.cls.dim, p.cls.bound, rng);
    const Vec t2 = random_ball_point(p.cls.dim, p.cls.bound, rng);
    const double lam = rng.next_double();
    const double chord = lam * linear_point_loss(p, t1) + (1.0 - lam) * linear_point_loss(p, t2);
    const double mid = linear_point_loss(p, lam * t1 + (1.0 - lam) * t2);
    const double margin = chord - mid;
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(p.cls.dim, p.S.size(), "chord-mid", margin);
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_solver_equivalence(long long n, std::uint64_t seed) {
  SuiteResult res{"solver-equivalence", true, n, 1e300, 1e-9, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 1 + rng.uniform_int(12);
    const int K = 1 + rng.uniform_int(5);
    const Vec v = random_unit_vec(N, rng);
    const Vec r = random_unit_vec(N, rng);
    const AssortmentSolution brute = best_assortment_bruteforce(v, r, K);
    const AssortmentSolution fast = best_assortment_fast(v, r, K);
    const double margin = fast.value - brute.value;
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(N, K, "fast-brute", margin);
    }
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

namespace {

struct BarrierFixture {
  int n_items = 2;
  int capacity = 1;
  double gamma = 10.0;
  Vec v;
  Vec r;
};

// N in 2..8, K in 1..min(3,N), gamma cycling {10, 100, 1000}.
BarrierFixture random_barrier_fixture(long long index, Rng& rng) {
  static constexpr double kGammas[3] = {10.0, 100.0, 1000.0};
  BarrierFixture f;
  f.n_items = 2 + rng.uniform_int(7);
  f.capacity = 1 + rng.uniform_int(std::min(3, f.n_items));
  f.gamma = kGammas[index % 3];
  f.v = random_unit_vec(f.n_items, rng);
  f.r = random_unit_vec(f.n_items, rng);
  return f;
}

struct BarrierEval {
  bool converged = false;
  double max_reward = 0.0;
  double mean_reward = 0.0;   // E_{S~q}[R]
  double min_dispersion_margin = 1e300;  // min over S of bound - sum_{i in S} 1/w_i
};

BarrierEval eval_barrier_fixture(const BarrierFixture& f, double barrier_scale) {
  BarrierSolverConfig cfg;
  cfg.barrier_scale = barrier_scale;
  cfg.max_sweeps = 2000000;  // ill-conditioned fixtures outrun the default cap
  const BarrierResult sol = log_barrier_dist(f.v, f.r, f.gamma, f.capacity, cfg);

  BarrierEval out;
  out.converged = sol.converged;
  const auto& q = sol.dist;
  const int size = static_cast<int>(q.support.size());
  Vec reward(size);
  for (int s = 0; s < size; ++s) reward(s) = expected_reward(q.support[s], f.v, f.r);
  out.max_reward = reward.maxCoeff();
  out.mean_reward = reward.dot(q.probs);

  const Vec w = item_marginals(q, f.n_items);
  const double k4 = std::pow(f.capacity + 1.0, 4);
  for (int s = 0; s < size; ++s) {
    double disp = 0.0;
    for (int item : q.support[s].items) {
      if (w(item - 1) <= 0.0) {
        out.min_dispersion_margin = -1e300;  // lost marginal: unambiguous failure
        return out;
      }
      disp += 1.0 / w(item - 1);
    }
    const double bound =
        1.01 * (f.n_items + f.gamma / k4 * (out.max_reward - reward(s)));
    out.min_dispersion_margin = std::min(out.min_dispersion_margin, bound - disp);
  }
  return out;
}

}  // namespace

SuiteResult check_barrier_low_regret(long long n, std::uint64_t seed) {
  SuiteResult res{"barrier-low-regret", true, n, 1e300, 0.0, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const BarrierFixture f = random_barrier_fixture(t, rng);
    const BarrierEval ev = eval_barrier_fixture(f, 1.0);
    if (!ev.converged) {
      res.pass = false;
      res.detail = "solver hit its sweep cap";
      continue;
    }
    const double bound =
        1.01 * f.n_items * std::pow(f.capacity + 1.0, 4) / f.gamma;
    const double margin = bound - (ev.max_reward - ev.mean_reward);
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.detail = describe(f.n_items, f.capacity, "margin", margin);
    }
  }
  res.pass = res.pass && res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_barrier_dispersion(long long n, std::uint64_t seed) {
  SuiteResult res{"barrier-dispersion", true, n, 1e300, 0.0, ""};
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const BarrierFixture f = random_barrier_fixture(t, rng);
    const BarrierEval ev = eval_barrier_fixture(f, 1.0);
    if (!ev.converged) {
      res.pass = false;
      res.detail = "solver hit its sweep cap";
      continue;
    }
    if (ev.min_dispersion_margin < res.worst_margin) {
      res.worst_margin = ev.min_dispersion_margin;
      res.detail = describe(f.n_items, f.capacity, "margin", ev.min_dispersion_margin);
    }
  }
  res.pass = res.pass && res.worst_margin >= -res.tolerance;
  return res;
}

SuiteResult check_barrier_mutation(long long n, std::uint64_t seed) {
  // Passes when the weakened barrier (half weight) breaks the dispersion
  // bound somewhere; worst_margin records the largest excess over the bound.
  SuiteResult res{"barrier-mutation", false, n, 0.0, 0.0, ""};
  Rng rng = Rng::seeded(seed);
  long long violations = 0;
  for (long long t = 0; t < n; ++t) {
    const BarrierFixture f = random_barrier_fixture(t, rng);
    const BarrierEval ev = eval_barrier_fixture(f, 0.5);
    if (!ev.converged) continue;
    const double excess = -ev.min_dispersion_margin;
    if (excess > 0.0) {
      ++violations;
      if (excess > res.worst_margin) {
        res.worst_margin = excess;
        res.detail = describe(f.n_items, f.capacity, "excess", excess);
      }
    }
  }
  res.pass = violations >= 1;
  res.detail = std::to_string(violations) + "/" + std::to_string(n) +
               " fixtures broke dispersion; " + res.detail;
  return res;
}

std::vector<DecCheckRow> dec_check_rows(long long n, std::uint64_t seed) {
  std::vector<DecCheckRow> rows;
  rows.reserve(static_cast<size_t>(n));
  Rng rng = Rng::seeded(seed);
  for (long long t = 0; t < n; ++t) {
    const int N = 2 + rng.uniform_int(3);  // 2..4
    const int K = 1 + rng.uniform_int(std::min(2, N));
    const Vec v = random_unit_vec(N, rng);
    const Vec r = random_unit_vec(N, rng);
    const StrategyKind kind =
        t % 2 == 0 ? StrategyKind::eps_greedy : StrategyKind::log_barrier;

    // Scale gamma so the closed-form bound is informative (clearly below the
    // trivial regret cap of 1) yet attainable.
    DecCheckRow row;
    row.fixture = static_cast<int>(t);
    row.n_items = N;
    row.capacity = K;
    AssortmentDistribution q;
    const double mult = 4.0 * std::pow(2.0, rng.uniform_int(3));  // 4, 8, 16
    if (kind == StrategyKind::eps_greedy) {
      row.kind = "eps-greedy";
      row.eps = rng.uniform(0.1, 0.5);
      row.gamma = mult * 16.0 * N * K / row.eps;
      q = eps_greedy_dist(v, r, row.eps, K);
    } else {
      row.kind = "log-barrier";
      row.gamma = mult * N * std::pow(K + 1.0, 4);
      BarrierSolverConfig cfg;
      cfg.max_sweeps = 2000000;
      BarrierResult sol = log_barrier_dist(v, r, row.gamma, K, cfg);
      if (!sol.converged)
        throw SolverError("barrier solve for fixture " + std::to_string(t) +
                          " hit its sweep cap");
      q = std::move(sol.dist);
    }

    DecSearchConfig search;
    search.seed = seed + 7 * static_cast<std::uint64_t>(t);
    const DecEstimate est = dec_estimate(q, v, r, row.gamma, K, search);
    row.estimate = est.value;
    row.bound = dec_bounds(kind, N, K, row.gamma, row.eps);
    row.margin = row.bound - row.estimate;
    rows.push_back(std::move(row));
  }
  return rows;
}

SuiteResult check_dec_soundness(long long n, std::uint64_t seed) {
  SuiteResult res{"dec-soundness", true, n, 1e300, 1e-6, ""};
  try {
    for (const DecCheckRow& row : dec_check_rows(n, seed)) {
      if (row.margin < res.worst_margin) {
        res.worst_margin = row.margin;
        res.detail = describe(row.n_items, row.capacity,
                              row.kind == "eps-greedy" ? "eps margin" : "barrier margin",
                              row.margin);
      }
    }
  } catch (const SolverError& e) {
    res.pass = false;
    res.detail = e.what();
    return res;
  }
  res.pass = res.worst_margin >= -res.tolerance;
  return res;
}

}  // namespace mnl

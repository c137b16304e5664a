#include "mnl/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "mnl/errors.hpp"
#include "mnl/function_classes.hpp"

namespace mnl {

namespace {

double log_sum_exp(const Vec& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

}  // namespace

void validate_distribution(const AssortmentDistribution& q, int n_items) {
  if (q.support.empty()) throw ValidationError("empty assortment distribution");
  if (q.probs.size() != static_cast<int>(q.support.size()))
    throw ValidationError("support/probability length mismatch");
  double total = 0.0;
  for (int k = 0; k < q.probs.size(); ++k) {
    if (q.probs(k) < 0.0) throw ValidationError("negative assortment probability");
    total += q.probs(k);
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("assortment probabilities must sum to 1");
  std::set<Assortment> seen;
  for (const Assortment& s : q.support) {
    validate_assortment(s, n_items);
    if (!seen.insert(s).second) throw ValidationError("duplicate assortment in support");
  }
}

Vec item_marginals(const AssortmentDistribution& q, int n_items) {
  Vec w = Vec::Zero(n_items);
  for (size_t k = 0; k < q.support.size(); ++k)
    for (int item : q.support[k].items) w(item - 1) += q.probs(static_cast<int>(k));
  return w;
}

int sample_index(const AssortmentDistribution& q, Rng& rng) {
  return rng.categorical(q.probs);
}

EpochPlan epoch_plan(int m, long long horizon, const ErrModel& err) {
  if (m < 1) throw ValidationError("epoch index must be >= 1");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  const auto tau = [](int k) -> long long { return (1LL << (k - 1)) - 1; };

  EpochPlan plan;
  plan.m = m;
  plan.fit_begin = m == 1 ? 1 : tau(m - 1) + 1;
  plan.fit_end = tau(m);
  plan.play_begin = tau(m) + 1;
  plan.play_end = std::min(tau(m + 1), horizon);

  // Fit-window size; epoch 1 (empty window) borrows the epoch-2 value.
  const double n_fit = std::max(1.0, std::pow(2.0, m - 2));
  const double delta = 1.0 / (static_cast<double>(horizon) * static_cast<double>(horizon));
  const double err_n = err.err_log(n_fit, delta);
  plan.eps = std::clamp(std::cbrt(err.n_items * err.capacity * err_n), 0.0, 1.0);
  const double k4 = std::pow(err.capacity + 1.0, 4);
  plan.gamma = std::max(1.0, std::sqrt(err.n_items * k4 / err_n));
  return plan;
}

AssortmentDistribution eps_greedy_dist(const Vec& v_hat, const Vec& r, double eps,
                                       int capacity) {
  if (eps < 0.0 || eps > 1.0) throw ValidationError("eps must lie in [0,1]");
  const int n = static_cast<int>(v_hat.size());
  const Assortment greedy = best_assortment_fast(v_hat, r, capacity).assortment;

  std::vector<Assortment> support{greedy};
  std::vector<double> mass{1.0 - eps};
  for (int i = 1; i <= n; ++i) {
    Assortment s(std::vector<int>{i});
    if (s == greedy)
      mass[0] += eps / n;
    else {
      support.push_back(std::move(s));
      mass.push_back(eps / n);
    }
  }

  AssortmentDistribution q;
  for (size_t k = 0; k < support.size(); ++k) {
    if (mass[k] <= 0.0) continue;
    q.support.push_back(std::move(support[k]));
  }
  q.probs = Vec(static_cast<int>(q.support.size()));
  int out = 0;
  for (size_t k = 0; k < support.size(); ++k)
    if (mass[k] > 0.0) q.probs(out++) = mass[k];
  return q;
}

BarrierResult log_barrier_dist(const Vec& v_hat, const Vec& r, double gamma, int capacity,
                               const BarrierSolverConfig& cfg) {
  const int n = static_cast<int>(v_hat.size());
  validate_unit_range(v_hat, "valuation");
  validate_unit_range(r, "reward");
  if (gamma <= 0.0) throw ValidationError("gamma must be positive");
  if (n > cfg.guard_items)
    throw CapacityError("log-barrier solver enumeration guard: " + std::to_string(n) +
                        " items > " + std::to_string(cfg.guard_items));
  if (capacity > cfg.guard_capacity)
    throw CapacityError("log-barrier solver enumeration guard: capacity " +
                        std::to_string(capacity) + " > " +
                        std::to_string(cfg.guard_capacity));

  const std::vector<Assortment> support = enumerate_assortments(n, capacity);
  const int size = static_cast<int>(support.size());
  Vec reward(size);
  for (int s = 0; s < size; ++s) reward(s) = expected_reward(support[s], v_hat, r);

  const double weight =
      cfg.barrier_scale * std::pow(capacity + 1.0, 4) / gamma;  // barrier coefficient
  const long long cap_sweeps = cfg.max_sweeps > 0 ? cfg.max_sweeps : 50LL * size;

  // Iterate in log space so multiplicative updates can recover tiny mass.
  Vec log_rho(size);
  if (cfg.init != nullptr) {
    if (cfg.init->size() != size) throw ValidationError("warm start has wrong length");
    for (int s = 0; s < size; ++s) log_rho(s) = std::log(std::max((*cfg.init)(s), 1e-30));
  } else {
    log_rho.setConstant(-std::log(static_cast<double>(size)));
  }
  log_rho.array() -= log_sum_exp(log_rho);

  const auto marginals = [&](const Vec& lr_vec) {
    Vec w = Vec::Zero(n);
    for (int s = 0; s < size; ++s) {
      const double p = std::exp(lr_vec(s));
      for (int item : support[s].items) w(item - 1) += p;
    }
    return w;
  };
  const auto objective = [&](const Vec& lr_vec, const Vec& w) {
    if (w.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
    double val = 0.0;
    for (int s = 0; s < size; ++s) val += std::exp(lr_vec(s)) * reward(s);
    return val + weight * w.array().log().sum();
  };

  const auto gradient = [&](const Vec& w_vec, Vec& g) {
    for (int s = 0; s < size; ++s) {
      double disp = 0.0;
      for (int item : support[s].items) disp += 1.0 / w_vec(item - 1);
      g(s) = reward(s) + weight * disp;
    }
  };
  const auto grad_mean = [&](const Vec& lr_vec, const Vec& g) {
    double mean = 0.0;
    for (int s = 0; s < size; ++s) mean += std::exp(lr_vec(s)) * g(s);
    return mean;
  };

  Vec w = marginals(log_rho);
  double obj = objective(log_rho, w);
  const double step0 = 1.0 / (2.0 * weight);
  const double step_max = 1e6 * step0;  // growth headroom; backtracking guards it
  double step = step0;
  BarrierResult res;
  res.sweeps = 0;

  Vec grad(size), cand_grad(size);
  while (res.sweeps < cap_sweeps) {
    gradient(w, grad);
    double gap = 0.0, mean = 0.0;
    if (cfg.kkt_tol > 0.0) {
      mean = grad_mean(log_rho, grad);
      gap = grad.maxCoeff() - mean;
      if (gap <= cfg.kkt_tol) {
        res.converged = true;
        break;
      }
    }

    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      Vec cand = log_rho + step * grad;
      cand.array() -= log_sum_exp(cand);
      const Vec cand_w = marginals(cand);
      const double cand_obj = objective(cand, cand_w);
      bool take = cfg.kkt_tol > 0.0 ? cand_obj > obj : cand_obj >= obj;
      bool step_adapted = false;
      const double plateau_slack =
          8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(obj));
      if (!take && cfg.kkt_tol > 0.0 && std::abs(cand_obj - obj) <= plateau_slack &&
          cand_w.minCoeff() > 0.0) {
        // Objective comparisons have gone ulp-flat; steer by the duality gap
        // instead, adapting the step toward critical damping (a sign flip of
        // the centered gradient means the step overshot the optimum).
        gradient(cand_w, cand_grad);
        const double cand_mean = grad_mean(cand, cand_grad);
        const double cand_gap = cand_grad.maxCoeff() - cand_mean;
        if (cand_gap < gap) {
          take = true;
          step_adapted = true;
          double flip = 0.0;
          for (int s = 0; s < size; ++s)
            flip += (grad(s) - mean) * (cand_grad(s) - cand_mean);
          step = flip < 0.0 ? step * 0.5 : std::min(step * 1.7, step_max);
        }
      }
      if (take) {
        const double gain = cand_obj - obj;
        log_rho = std::move(cand);
        w = cand_w;
        obj = cand_obj;
        ++res.sweeps;
        accepted = true;
        if (cfg.kkt_tol <= 0.0 && gain < cfg.tol) res.converged = true;
        // Grow the step whenever sweeps keep succeeding: the conservative
        // initial value is a crawl on strongly regularized instances, and
        // backtracking recovers from any overshoot.
        if (!step_adapted) step = std::min(step * 1.3, step_max);
        break;
      }
      step *= 0.5;
    }
    // A full stall means no acceptable move at any step size; under the gap
    // criterion that alone is not proof of convergence.
    if (!accepted) {
      res.converged = cfg.kkt_tol <= 0.0;
      break;
    }
    if (res.converged) break;
  }

  res.dist.support = support;
  res.dist.probs = log_rho.array().exp().matrix();
  res.dist.probs /= res.dist.probs.sum();
  res.objective = obj;
  // Duality gap of the final iterate over the simplex: max_S grad_S - <rho, grad>.
  for (int s = 0; s < size; ++s) {
    double disp = 0.0;
    for (int item : support[s].items) disp += 1.0 / w(item - 1);
    grad(s) = reward(s) + weight * disp;
  }
  res.kkt_residual = grad.maxCoeff() - res.dist.probs.dot(grad);
  return res;
}

FgtsPosterior FgtsPosterior::uniform(int size, double eta) {
  if (size < 1) throw ValidationError("posterior needs at least one member");
  if (eta <= 0.0 || eta > 1.0) throw ValidationError("eta must lie in (0,1]");
  FgtsPosterior p;
  p.log_weights = Vec::Zero(size);
  p.eta = eta;
  return p;
}

Vec FgtsPosterior::weights() const {
  Vec w = (log_weights.array() - log_sum_exp(log_weights)).exp().matrix();
  return w / w.sum();
}

double fgts_default_eta(int n_items, int capacity, int class_size, double horizon) {
  const double raw = std::sqrt(n_items * std::log(static_cast<double>(class_size)) / horizon) /
                     std::pow(static_cast<double>(capacity), 2.5);
  return std::min(1.0, raw > 0.0 ? raw : 1.0);
}

double fgts_loss(const ChoiceDistribution& mu, int purchase, double max_reward_under_f,
                 double eta, int capacity) {
  if (eta <= 0.0 || eta > 1.0) throw ValidationError("eta must lie in (0,1]");
  double sq = 0.0;
  for (int k = 0; k < mu.set.size(); ++k) {
    const double target = mu.set.items[static_cast<size_t>(k)] == purchase ? 1.0 : 0.0;
    const double d = mu.probs(k + 1) - target;
    sq += d * d;
  }
  return sq / (8.0 * eta * capacity) - max_reward_under_f;
}

void fgts_update(FgtsPosterior& p, const Vec& losses) {
  if (losses.size() != p.log_weights.size())
    throw ValidationError("loss vector length mismatch");
  p.log_weights -= p.eta * losses;
  p.log_weights.array() -= log_sum_exp(p.log_weights);
}

namespace {

Vec model_values(const Instance& inst, int member, const Vec& theta, int context_id) {
  if (inst.kind == ClassKind::finite) return eval_finite(inst.finite, member, context_id);
  return eval_linear(inst.linear, theta, inst.universe.features[context_id]);
}

}  // namespace

Trace run_alg1(const StochasticEnv& env, StrategyKind strategy, long long horizon,
               std::uint64_t seed, const OracleConfig& cfg) {
  validate_env(env);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  const Instance& inst = env.instance;
  const int cap = env.capacity;
  const ErrModel err = ErrModel::for_instance(inst, cap, cfg.err_constant);

  Rng root = Rng::seeded(seed);
  Rng env_rng = root.split(1);
  Rng policy_rng = root.split(2);
  Rng purchase_rng = root.split(3);

  Trace trace;
  trace.seed = seed;
  trace.rows.reserve(static_cast<size_t>(horizon));

  int member = 0;
  Vec theta;
  if (inst.kind == ClassKind::linear) theta = Vec::Zero(inst.linear.dim);

  std::vector<RegressionSample> epoch_data;
  EpochPlan plan = epoch_plan(1, horizon, err);
  std::map<int, AssortmentDistribution> barrier_cache;  // atom index -> distribution

  for (long long t = 1; t <= horizon; ++t) {
    if (t > plan.play_end) {
      if (inst.kind == ClassKind::finite)
        member = erm_fit_finite(inst.finite, inst.universe, epoch_data);
      else
        theta = erm_fit_linear(inst.linear, inst.universe, epoch_data);
      epoch_data.clear();
      plan = epoch_plan(plan.m + 1, horizon, err);
      barrier_cache.clear();
    }

    const EnvRound round = env_step(env, t, env_rng);
    const Vec v_hat = model_values(inst, member, theta, round.context_id);

    const AssortmentDistribution* q = nullptr;
    AssortmentDistribution local;
    if (strategy == StrategyKind::eps_greedy) {
      const double eps = cfg.fixed_eps >= 0.0 ? cfg.fixed_eps : plan.eps;
      local = eps_greedy_dist(v_hat, round.rewards, eps, cap);
      q = &local;
    } else {
      auto it = barrier_cache.find(round.atom);
      if (it == barrier_cache.end()) {
        const double gamma = cfg.fixed_gamma > 0.0 ? cfg.fixed_gamma : plan.gamma;
        BarrierSolverConfig solver_cfg;
        solver_cfg.max_sweeps = 2000000;  // ill-conditioned solves need headroom
        BarrierResult res = log_barrier_dist(v_hat, round.rewards, gamma, cap, solver_cfg);
        if (!res.converged)
          throw SolverError("log-barrier solver hit its sweep cap (duality gap " +
                            std::to_string(res.kkt_residual) + ")");
        it = barrier_cache.emplace(round.atom, std::move(res.dist)).first;
      }
      q = &it->second;
    }

    const Assortment& played = q->support[static_cast<size_t>(sample_index(*q, policy_rng))];
    const Vec v_star = eval_truth(inst, round.context_id);
    const int purchase = sample_purchase(played, v_star, purchase_rng);
    const double opt = best_assortment_fast(v_star, round.rewards, cap).value;
    const double got = expected_reward(played, v_star, round.rewards);
    append_round(trace, t, round, played, purchase, opt, got, plan.m);
    epoch_data.push_back(RegressionSample{round.context_id, played, purchase});
  }
  return trace;
}

Trace run_alg2(const AdversarialEnv& env, StrategyKind strategy, long long horizon,
               std::uint64_t seed, double gamma, double eps) {
  validate_env(env, horizon);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  const Instance& inst = env.instance;
  const int n = inst.universe.n_items;
  const int cap = env.capacity;

  // Theory tunings from the error curve with constant 1.
  const ErrModel tuning = ErrModel::for_instance(inst, cap, 1.0);
  const double reg = tuning.reg_log(static_cast<double>(horizon));
  if (strategy == StrategyKind::eps_greedy && eps < 0.0)
    eps = std::clamp(std::cbrt(n * cap * reg / static_cast<double>(horizon)), 0.0, 1.0);
  if (strategy == StrategyKind::log_barrier && gamma <= 0.0)
    gamma = cap * cap * std::sqrt(n * static_cast<double>(horizon) / reg);

  Rng root = Rng::seeded(seed);
  Rng env_rng = root.split(1);
  Rng policy_rng = root.split(2);
  Rng purchase_rng = root.split(3);
  Rng oracle_rng = root.split(4);

  Trace trace;
  trace.seed = seed;
  trace.rows.reserve(static_cast<size_t>(horizon));
  trace.oracle_log_regret.reserve(static_cast<size_t>(horizon));

  HedgeState hedge;
  double hedge_lr = 0.0;
  OgdState ogd;
  if (inst.kind == ClassKind::finite) {
    hedge = HedgeState::uniform(inst.finite.size());
    hedge_lr = hedge_default_lr(inst.finite.size(), static_cast<double>(horizon), cap,
                                inst.finite.beta);
  } else {
    ogd = OgdState::zero(inst.linear.dim);
  }

  double cum_log_regret = 0.0;
  Vec warm;  // previous round's barrier solution over the fixed enumeration

  for (long long t = 1; t <= horizon; ++t) {
    const EnvRound round = env_step(env, t, env_rng);

    const int drawn =
        inst.kind == ClassKind::finite ? hedge_draw(hedge, oracle_rng) : 0;
    const Vec v_hat = model_values(inst, drawn, ogd.theta, round.context_id);

    AssortmentDistribution q;
    if (strategy == StrategyKind::eps_greedy) {
      q = eps_greedy_dist(v_hat, round.rewards, eps, cap);
    } else {
      BarrierSolverConfig solver_cfg;
      solver_cfg.max_sweeps = 2000000;
      if (warm.size() > 0) solver_cfg.init = &warm;
      BarrierResult res = log_barrier_dist(v_hat, round.rewards, gamma, cap, solver_cfg);
      if (!res.converged)
        throw SolverError("log-barrier solver hit its sweep cap (duality gap " +
                          std::to_string(res.kkt_residual) + ")");
      warm = res.dist.probs;
      q = std::move(res.dist);
    }

    const Assortment played = q.support[static_cast<size_t>(sample_index(q, policy_rng))];
    const Vec v_star = eval_truth(inst, round.context_id);
    const int purchase = sample_purchase(played, v_star, purchase_rng);
    const double opt = best_assortment_fast(v_star, round.rewards, cap).value;
    const double got = expected_reward(played, v_star, round.rewards);
    append_round(trace, t, round, played, purchase, opt, got, 0);

    const RegressionSample sample{round.context_id, played, purchase};
    cum_log_regret += log_loss(choice_distribution(played, v_hat), purchase) -
                      log_loss(choice_distribution(played, v_star), purchase);
    trace.oracle_log_regret.push_back(cum_log_regret);
    if (inst.kind == ClassKind::finite)
      hedge_update(hedge, inst.finite, inst.universe, sample, hedge_lr);
    else
      ogd_step(ogd, inst.linear, inst.universe, sample,
               ogd_default_lr(inst.linear.bound, ogd.step + 1));
  }
  return trace;
}

Trace run_fgts(const StochasticEnv& env, long long horizon, std::uint64_t seed, double eta,
               int axis_points) {
  validate_env(env);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  const Instance& inst = env.instance;
  const int cap = env.capacity;
  const int n_contexts = inst.universe.n_contexts;

  // Materialize the member set: the finite class as-is, or a theta grid over
  // the ball for a linear class.
  std::vector<Mat> values;  // one n_contexts x N table per member
  if (inst.kind == ClassKind::finite) {
    values = inst.finite.members;
  } else {
    const int d = inst.linear.dim;
    if (d > 3) throw CapacityError("theta grid supports at most 3 dimensions");
    if (axis_points < 2) throw ValidationError("theta grid needs at least 2 axis points");
    const double b = inst.linear.bound;
    std::vector<Vec> grid;
    Vec theta(d);
    const long long total = static_cast<long long>(std::pow(axis_points, d));
    for (long long g = 0; g < total; ++g) {
      long long rest = g;
      for (int j = 0; j < d; ++j) {
        const int idx = static_cast<int>(rest % axis_points);
        rest /= axis_points;
        theta(j) = -b + 2.0 * b * idx / (axis_points - 1);
      }
      if (theta.norm() <= b + 1e-12) grid.push_back(theta);
    }
    values.reserve(grid.size());
    for (const Vec& g : grid) {
      Mat table(n_contexts, inst.universe.n_items);
      for (int c = 0; c < n_contexts; ++c)
        table.row(c) = eval_linear(inst.linear, g, inst.universe.features[c]).transpose();
      values.push_back(std::move(table));
    }
  }
  const int size = static_cast<int>(values.size());
  if (eta <= 0.0)
    eta = fgts_default_eta(inst.universe.n_items, cap, size, static_cast<double>(horizon));

  // Best assortment and its value for every (member, atom): fixed all run.
  const int n_atoms = static_cast<int>(env.atoms.size());
  std::vector<std::vector<AssortmentSolution>> best(static_cast<size_t>(size));
  for (int g = 0; g < size; ++g) {
    best[static_cast<size_t>(g)].reserve(static_cast<size_t>(n_atoms));
    for (int a = 0; a < n_atoms; ++a) {
      const Vec v = values[static_cast<size_t>(g)].row(env.atoms[a].context_id).transpose();
      best[static_cast<size_t>(g)].push_back(
          best_assortment_fast(v, env.atoms[a].rewards, cap));
    }
  }

  Rng root = Rng::seeded(seed);
  Rng env_rng = root.split(1);
  Rng policy_rng = root.split(2);
  Rng purchase_rng = root.split(3);

  Trace trace;
  trace.seed = seed;
  trace.rows.reserve(static_cast<size_t>(horizon));
  FgtsPosterior posterior = FgtsPosterior::uniform(size, eta);
  Vec losses(size);

  for (long long t = 1; t <= horizon; ++t) {
    const EnvRound round = env_step(env, t, env_rng);
    const int g_t = policy_rng.categorical(posterior.weights());
    const Assortment& played = best[static_cast<size_t>(g_t)][static_cast<size_t>(round.atom)].assortment;

    const Vec v_star = eval_truth(inst, round.context_id);
    const int purchase = sample_purchase(played, v_star, purchase_rng);
    const double opt = best_assortment_fast(v_star, round.rewards, cap).value;
    const double got = expected_reward(played, v_star, round.rewards);
    append_round(trace, t, round, played, purchase, opt, got, 0);

    for (int g = 0; g < size; ++g) {
      const Vec v_g = values[static_cast<size_t>(g)].row(round.context_id).transpose();
      losses(g) =
          fgts_loss(choice_distribution(played, v_g), purchase,
                    best[static_cast<size_t>(g)][static_cast<size_t>(round.atom)].value, eta, cap);
    }
    fgts_update(posterior, losses);
  }
  return trace;
}

}  // namespace mnl

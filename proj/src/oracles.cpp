#include "mnl/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "mnl/assortment.hpp"

namespace mnl {

namespace {

double floored_log(double x) { return std::max(std::log(x), std::log(2.0)); }

}  // namespace

ErrModel ErrModel::for_instance(const Instance& inst, int capacity, double constant) {
  ErrModel m;
  m.kind = inst.kind;
  m.constant = constant;
  m.n_items = inst.universe.n_items;
  m.capacity = capacity;
  if (inst.kind == ClassKind::finite) {
    m.beta = inst.finite.beta;
    m.class_size = inst.finite.size();
  } else {
    m.dim = inst.linear.dim;
    m.bound = inst.linear.bound;
  }
  return m;
}

double ErrModel::err_log(double n, double delta) const {
  if (n < 1.0) n = 1.0;
  if (kind == ClassKind::finite)
    return constant * std::log(static_cast<double>(capacity) / beta) *
           std::log(static_cast<double>(class_size) / delta) / n;
  return constant * static_cast<double>(dim) * bound *
         floored_log(static_cast<double>(capacity)) * floored_log(bound) *
         std::log(1.0 / delta) / n;
}

double ErrModel::reg_log(double t) const {
  if (t < 1.0) t = 1.0;
  if (kind == ClassKind::finite)
    return constant * std::sqrt(t * std::log(static_cast<double>(class_size))) *
           std::log(static_cast<double>(capacity) / beta);
  return constant * bound * std::sqrt(t);
}

int erm_fit_finite(const FiniteClass& cls, const ContextUniverse& uni,
                   const std::vector<RegressionSample>& data) {
  (void)uni;
  if (data.empty()) return 0;
  int best = 0;
  double best_loss = 0.0;
  for (int m = 0; m < cls.size(); ++m) {
    double loss = 0.0;
    for (const RegressionSample& s : data)
      loss += log_loss(choice_distribution(s.set, eval_finite(cls, m, s.context_id)),
                       s.purchase);
    if (m == 0 || loss < best_loss) {
      best = m;
      best_loss = loss;
    }
  }
  return best;
}

Vec linear_logloss_gradient(const LinearClass& cls, const Vec& theta, const Mat& x,
                            const Assortment& S, int purchase) {
  double denom = 1.0;
  Vec acc = Vec::Zero(cls.dim);
  for (int item : S.items) {
    const double w = std::exp(theta.dot(x.col(item - 1)) - cls.bound);
    denom += w;
    acc += w * x.col(item - 1);
  }
  Vec g = acc / denom;
  if (purchase != 0) g -= x.col(purchase - 1);
  return g;
}

Vec erm_fit_linear(const LinearClass& cls, const ContextUniverse& uni,
                   const std::vector<RegressionSample>& data, int max_iter, double tol) {
  Vec theta = Vec::Zero(cls.dim);
  if (data.empty()) return theta;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (int k = 1; k <= max_iter; ++k) {
    Vec grad = Vec::Zero(cls.dim);
    for (const RegressionSample& s : data)
      grad += linear_logloss_gradient(cls, theta, uni.features[s.context_id], s.set,
                                      s.purchase);
    grad *= inv_n;
    const double step = 1.0 / (2.0 * std::sqrt(static_cast<double>(k)));
    Vec next = theta - step * grad;
    const double norm = next.norm();
    if (norm > cls.bound) next *= cls.bound / norm;
    const double mapping = (theta - next).norm() / step;
    theta = next;
    if (mapping <= tol) break;
  }
  return theta;
}

HedgeState HedgeState::uniform(int class_size) {
  HedgeState st;
  st.weights = Vec::Constant(class_size, 1.0 / static_cast<double>(class_size));
  return st;
}

double hedge_default_lr(int class_size, double horizon, int capacity, double beta) {
  return std::sqrt(8.0 * std::log(static_cast<double>(class_size)) / horizon) /
         std::log(static_cast<double>(capacity + 1) / beta);
}

int hedge_draw(const HedgeState& state, Rng& rng) { return rng.categorical(state.weights); }

void hedge_update(HedgeState& state, const FiniteClass& cls, const ContextUniverse& uni,
                  const RegressionSample& sample, double lr) {
  (void)uni;
  for (int m = 0; m < cls.size(); ++m) {
    const double loss = log_loss(
        choice_distribution(sample.set, eval_finite(cls, m, sample.context_id)),
        sample.purchase);
    state.weights(m) *= std::exp(-lr * loss);
  }
  state.weights /= state.weights.sum();
}

int hedge_step(HedgeState& state, const FiniteClass& cls, const ContextUniverse& uni,
               const RegressionSample& sample, double lr, Rng& rng) {
  const int prediction = hedge_draw(state, rng);
  hedge_update(state, cls, uni, sample, lr);
  return prediction;
}

OgdState OgdState::zero(int dim) {
  OgdState st;
  st.theta = Vec::Zero(dim);
  return st;
}

double ogd_default_lr(double bound, long long t) {
  return bound / (2.0 * std::sqrt(static_cast<double>(t)));
}

Vec ogd_step(OgdState& state, const LinearClass& cls, const ContextUniverse& uni,
             const RegressionSample& sample, double lr) {
  const Vec prediction = state.theta;
  const Vec grad = linear_logloss_gradient(cls, state.theta,
                                           uni.features[sample.context_id], sample.set,
                                           sample.purchase);
  Vec next = state.theta - lr * grad;
  const double norm = next.norm();
  if (norm > cls.bound) next *= cls.bound / norm;
  state.theta = next;
  state.step += 1;
  return prediction;
}

std::vector<RegressionSample> sample_regression_stream(const Instance& inst, int capacity,
                                                       long long n, Rng& rng) {
  const std::vector<Assortment> sets =
      enumerate_assortments(inst.universe.n_items, capacity);
  std::vector<RegressionSample> out;
  out.reserve(static_cast<size_t>(n));
  for (long long t = 0; t < n; ++t) {
    RegressionSample s;
    s.context_id = rng.uniform_int(inst.universe.n_contexts);
    s.set = sets[rng.uniform_int(static_cast<int>(sets.size()))];
    s.purchase = sample_purchase(s.set, eval_truth(inst, s.context_id), rng);
    out.push_back(std::move(s));
  }
  return out;
}

double finite_excess_log_loss(const Instance& inst, int member,
                              const std::vector<RegressionSample>& eval) {
  double total = 0.0;
  for (const RegressionSample& s : eval) {
    const auto mu = choice_distribution(s.set, eval_finite(inst.finite, member, s.context_id));
    const auto mu_star = choice_distribution(s.set, eval_truth(inst, s.context_id));
    total += log_loss(mu, s.purchase) - log_loss(mu_star, s.purchase);
  }
  return total / static_cast<double>(eval.size());
}

double linear_excess_log_loss(const Instance& inst, const Vec& theta,
                              const std::vector<RegressionSample>& eval) {
  double total = 0.0;
  for (const RegressionSample& s : eval) {
    const auto mu = choice_distribution(
        s.set, eval_linear(inst.linear, theta, inst.universe.features[s.context_id]));
    const auto mu_star = choice_distribution(s.set, eval_truth(inst, s.context_id));
    total += log_loss(mu, s.purchase) - log_loss(mu_star, s.purchase);
  }
  return total / static_cast<double>(eval.size());
}

OracleRunResult hedge_regret_run(const Instance& inst, int capacity, long long horizon,
                                 double lr, std::uint64_t seed) {
  Rng rng = Rng::seeded(seed);
  const std::vector<RegressionSample> stream =
      sample_regression_stream(inst, capacity, horizon, rng);
  const int size = inst.finite.size();
  if (lr <= 0.0)
    lr = hedge_default_lr(size, static_cast<double>(horizon), capacity, inst.finite.beta);

  HedgeState state = HedgeState::uniform(size);
  double played_loss = 0.0;
  Vec member_loss = Vec::Zero(size);
  Rng draws = rng.split(1);
  for (const RegressionSample& s : stream) {
    const int pred = hedge_step(state, inst.finite, inst.universe, s, lr, draws);
    played_loss += log_loss(
        choice_distribution(s.set, eval_finite(inst.finite, pred, s.context_id)),
        s.purchase);
    for (int m = 0; m < size; ++m)
      member_loss(m) += log_loss(
          choice_distribution(s.set, eval_finite(inst.finite, m, s.context_id)),
          s.purchase);
  }
  OracleRunResult res;
  res.measured_regret = played_loss - member_loss.minCoeff();
  res.bound = 2.0 * std::sqrt(static_cast<double>(horizon) *
                              std::log(static_cast<double>(size))) *
              std::log(static_cast<double>(capacity + 1) / inst.finite.beta);
  return res;
}

OracleRunResult ogd_regret_run(const Instance& inst, int capacity, long long horizon,
                               std::uint64_t seed) {
  Rng rng = Rng::seeded(seed);
  const std::vector<RegressionSample> stream =
      sample_regression_stream(inst, capacity, horizon, rng);
  OgdState state = OgdState::zero(inst.linear.dim);
  double played_loss = 0.0, truth_loss = 0.0;
  long long t = 0;
  for (const RegressionSample& s : stream) {
    ++t;
    const Vec pred = ogd_step(state, inst.linear, inst.universe, s,
                              ogd_default_lr(inst.linear.bound, t));
    played_loss += log_loss(
        choice_distribution(
            s.set, eval_linear(inst.linear, pred, inst.universe.features[s.context_id])),
        s.purchase);
    truth_loss += log_loss(choice_distribution(s.set, eval_truth(inst, s.context_id)),
                           s.purchase);
  }
  OracleRunResult res;
  res.measured_regret = played_loss - truth_loss;
  res.bound = 3.0 * inst.linear.bound * std::sqrt(static_cast<double>(horizon));
  return res;
}

}  // namespace mnl

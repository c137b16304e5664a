#pragma once

#include <vector>

#include "mnl/core.hpp"
#include "mnl/function_classes.hpp"

// Offline ERM and the two online regression oracles (Hedge over a finite
// class, projected online gradient descent over a linear class), all on the
// MNL log loss, plus the generalization-error curves that shape algorithm
// schedules.

namespace mnl {

struct RegressionSample {
  int context_id = 0;
  Assortment set;
  int purchase = 0;  // in {0} ∪ set
};

// Generalization-error curve Err_log(n, delta) and online-regret curve
// Reg_log(T) for one class. The big-O constant is a config knob; it shapes
// epsilon/gamma schedules only. For the linear curve the log K and log B
// factors are floored at log 2 so the curve stays positive at K = 1 or B <= 2.
struct ErrModel {
  ClassKind kind = ClassKind::finite;
  double constant = 1.0;
  int n_items = 1;      // N
  int capacity = 1;     // K
  double beta = 0.05;   // finite class floor
  int class_size = 1;   // |F|, finite
  int dim = 1;          // d, linear
  double bound = 1.0;   // B, linear

  static ErrModel for_instance(const Instance& inst, int capacity, double constant = 1.0);

  double err_log(double n, double delta) const;
  double reg_log(double t) const;
};

// Exact argmin of total log loss over members; ties take the smallest index.
// Empty dataset returns the default member 0.
int erm_fit_finite(const FiniteClass& cls, const ContextUniverse& uni,
                   const std::vector<RegressionSample>& data);

// Gradient of the log loss at theta for one sample:
//   sum_{j in S} e^{theta'x_j - B} x_j / (1 + sum_{j in S} e^{theta'x_j - B})
//   - x_i 1[i != 0].
// Euclidean norm is at most 2.
Vec linear_logloss_gradient(const LinearClass& cls, const Vec& theta, const Mat& x,
                            const Assortment& S, int purchase);

// Projected gradient descent on the mean log loss, step 1/(2 sqrt k), stopped
// at gradient-mapping norm <= tol or the iteration cap. Empty dataset returns
// theta = 0.
Vec erm_fit_linear(const LinearClass& cls, const ContextUniverse& uni,
                   const std::vector<RegressionSample>& data, int max_iter = 5000,
                   double tol = 1e-6);

// Hedge over the members of a finite class. Weights stay positive and
// normalized; each step draws the prediction from the current weights, then
// multiplies every weight by exp(-lr * that member's log loss on the sample).
struct HedgeState {
  Vec weights;

  static HedgeState uniform(int class_size);
};

double hedge_default_lr(int class_size, double horizon, int capacity, double beta);

// Draw a member index from the current weights without touching them.
int hedge_draw(const HedgeState& state, Rng& rng);

// Multiply every weight by exp(-lr * member log loss on the sample),
// renormalize.
void hedge_update(HedgeState& state, const FiniteClass& cls, const ContextUniverse& uni,
                  const RegressionSample& sample, double lr);

int hedge_step(HedgeState& state, const FiniteClass& cls, const ContextUniverse& uni,
               const RegressionSample& sample, double lr, Rng& rng);

// Online gradient descent on the B-ball; the prediction is the pre-update
// theta.
struct OgdState {
  Vec theta;
  long long step = 0;  // completed steps

  static OgdState zero(int dim);
};

double ogd_default_lr(double bound, long long t);

Vec ogd_step(OgdState& state, const LinearClass& cls, const ContextUniverse& uni,
             const RegressionSample& sample, double lr);

// Realizable stream from an instance: contexts uniform over atoms, assortments
// uniform over sizes 1..capacity, purchases drawn from the truth model.
std::vector<RegressionSample> sample_regression_stream(const Instance& inst, int capacity,
                                                       long long n, Rng& rng);

// Mean log-loss gap versus the truth model over an evaluation set.
double finite_excess_log_loss(const Instance& inst, int member,
                              const std::vector<RegressionSample>& eval);
double linear_excess_log_loss(const Instance& inst, const Vec& theta,
                              const std::vector<RegressionSample>& eval);

// One measured online-oracle run on a fresh realizable stream.
struct OracleRunResult {
  double measured_regret = 0.0;  // vs best fixed member (Hedge) or theta* (OGD)
  double bound = 0.0;
};

OracleRunResult hedge_regret_run(const Instance& inst, int capacity, long long horizon,
                                 double lr, std::uint64_t seed);
OracleRunResult ogd_regret_run(const Instance& inst, int capacity, long long horizon,
                               std::uint64_t seed);

}  // namespace mnl

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mnl/core.hpp"
#include "mnl/rng.hpp"

// The two realizable value-function classes: a finite set of lookup tables
// with image [beta,1]^N, and the log-linear family v_i = exp(theta'x_i - B)
// over parameters in the B-ball with unit-ball feature columns.

namespace mnl {

using Mat = Eigen::MatrixXd;

enum class ClassKind { finite, linear };

// Finite collection of context atoms. Finite classes use only ids 0..n-1;
// linear classes attach a d x N feature matrix per atom, columns in the unit
// ball.
struct ContextUniverse {
  int n_items = 0;
  int n_contexts = 0;
  std::vector<Mat> features;  // per atom, d x N; empty for finite classes
};

// members[m] is an n_contexts x N table; row x holds member m's valuations at
// context x, every entry in [beta, 1]. truth_index designates f*.
struct FiniteClass {
  double beta = 0.05;
  int truth_index = 0;
  std::vector<Mat> members;

  int size() const { return static_cast<int>(members.size()); }
};

struct LinearClass {
  int dim = 0;
  double bound = 1.0;  // B
  Vec theta_star;
};

struct Instance {
  ClassKind kind = ClassKind::finite;
  ContextUniverse universe;
  FiniteClass finite;
  LinearClass linear;
};

// Throws ValidationError if any table entry leaves [beta,1], the truth index
// is out of range, member shapes disagree, or a feature column leaves the
// unit ball.
void validate_instance(const Instance& inst);

// Member's stored valuations at one context atom.
Vec eval_finite(const FiniteClass& cls, int member, int context_id);

// v_i = exp(theta'x_i - B), always in (0,1]. Enforces |theta| <= B + 1e-9
// and column norms <= 1 + 1e-9.
Vec eval_linear(const LinearClass& cls, const Vec& theta, const Mat& x);

// Valuations of the instance's truth model at a context atom.
Vec eval_truth(const Instance& inst, int context_id);

// Realizable random instance: finite tables i.i.d. uniform [beta,1] with
// truth member 0, or uniform theta* in the B-ball with uniform unit-ball
// feature columns. Deterministic per rng state.
Instance gen_random_instance(ClassKind kind, int n_items, int n_contexts,
                             int size, Rng& rng, double beta = 0.05,
                             double bound = 1.0);

// Structured-text round trip (JSON).
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

// Uniform draw from the radius-ball in dim dimensions.
Vec random_ball_point(int dim, double radius, Rng& rng);

}  // namespace mnl

#include "mnl/function_classes.hpp"

#include <cmath>
#include <json.hpp>
#include <string>

namespace mnl {

using nlohmann::json;

void validate_instance(const Instance& inst) {
  const int N = inst.universe.n_items;
  const int C = inst.universe.n_contexts;
  if (N < 1) throw ValidationError("instance: n_items < 1");
  if (C < 1) throw ValidationError("instance: n_contexts < 1");
  if (inst.kind == ClassKind::finite) {
    const FiniteClass& fc = inst.finite;
    if (fc.members.empty()) throw ValidationError("finite class: no members");
    if (!(fc.beta > 0.0 && fc.beta < 1.0))
      throw ValidationError("finite class: beta outside (0,1)");
    if (fc.truth_index < 0 || fc.truth_index >= fc.size())
      throw ValidationError("finite class: truth index out of range");
    for (const Mat& table : fc.members) {
      if (table.rows() != C || table.cols() != N)
        throw ValidationError("finite class: table shape mismatch");
      if (table.minCoeff() < fc.beta || table.maxCoeff() > 1.0)
        throw ValidationError("finite class: entry outside [beta,1]");
    }
  } else {
    const LinearClass& lc = inst.linear;
    if (lc.dim < 1) throw ValidationError("linear class: dim < 1");
    if (!(lc.bound > 0.0)) throw ValidationError("linear class: bound <= 0");
    if (lc.theta_star.size() != lc.dim)
      throw ValidationError("linear class: theta* dimension mismatch");
    if (lc.theta_star.norm() > lc.bound + 1e-9)
      throw ValidationError("linear class: |theta*| exceeds bound");
    if (static_cast<int>(inst.universe.features.size()) != C)
      throw ValidationError("linear class: features missing for some contexts");
    for (const Mat& x : inst.universe.features) {
      if (x.rows() != lc.dim || x.cols() != N)
        throw ValidationError("linear class: feature shape mismatch");
      for (int i = 0; i < N; ++i)
        if (x.col(i).norm() > 1.0 + 1e-9)
          throw ValidationError("linear class: feature column norm exceeds 1");
    }
  }
}

Vec eval_finite(const FiniteClass& cls, int member, int context_id) {
  if (member < 0 || member >= cls.size())
    throw ValidationError("eval_finite: member " + std::to_string(member) + " out of range");
  const Mat& table = cls.members[member];
  if (context_id < 0 || context_id >= table.rows())
    throw ValidationError("eval_finite: unknown context id " + std::to_string(context_id));
  return table.row(context_id).transpose();
}

Vec eval_linear(const LinearClass& cls, const Vec& theta, const Mat& x) {
  if (theta.size() != cls.dim) throw ValidationError("eval_linear: theta dimension mismatch");
  if (theta.norm() > cls.bound + 1e-9)
    throw ValidationError("eval_linear: |theta| exceeds bound");
  if (x.rows() != cls.dim) throw ValidationError("eval_linear: feature dimension mismatch");
  Vec v(x.cols());
  for (int i = 0; i < x.cols(); ++i) {
    if (x.col(i).norm() > 1.0 + 1e-9)
      throw ValidationError("eval_linear: feature column norm exceeds 1");
    v(i) = std::exp(theta.dot(x.col(i)) - cls.bound);
  }
  return v;
}

Vec eval_truth(const Instance& inst, int context_id) {
  if (inst.kind == ClassKind::finite)
    return eval_finite(inst.finite, inst.finite.truth_index, context_id);
  if (context_id < 0 || context_id >= inst.universe.n_contexts)
    throw ValidationError("eval_truth: unknown context id");
  return eval_linear(inst.linear, inst.linear.theta_star,
                     inst.universe.features[context_id]);
}

Vec random_ball_point(int dim, double radius, Rng& rng) {
  Vec dir(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (int i = 0; i < dim; ++i) dir(i) = rng.normal();
    norm = dir.norm();
  }
  const double r = radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(dim));
  return dir * (r / norm);
}

Instance gen_random_instance(ClassKind kind, int n_items, int n_contexts,
                             int size, Rng& rng, double beta, double bound) {
  Instance inst;
  inst.kind = kind;
  inst.universe.n_items = n_items;
  inst.universe.n_contexts = n_contexts;
  if (kind == ClassKind::finite) {
    inst.finite.beta = beta;
    inst.finite.truth_index = 0;
    inst.finite.members.reserve(size);
    for (int m = 0; m < size; ++m) {
      Mat table(n_contexts, n_items);
      for (int c = 0; c < n_contexts; ++c)
        for (int i = 0; i < n_items; ++i) table(c, i) = rng.uniform(beta, 1.0);
      inst.finite.members.push_back(std::move(table));
    }
  } else {
    inst.linear.dim = size;
    inst.linear.bound = bound;
    inst.linear.theta_star = random_ball_point(size, bound, rng);
    inst.universe.features.reserve(n_contexts);
    for (int c = 0; c < n_contexts; ++c) {
      Mat x(size, n_items);
      for (int i = 0; i < n_items; ++i) x.col(i) = random_ball_point(size, 1.0, rng);
      inst.universe.features.push_back(std::move(x));
    }
  }
  validate_instance(inst);
  return inst;
}

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("instance json: bad matrix");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  Mat m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc)
      throw ValidationError("instance json: ragged matrix");
    for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["kind"] = inst.kind == ClassKind::finite ? "finite" : "linear";
  j["n_items"] = inst.universe.n_items;
  j["n_contexts"] = inst.universe.n_contexts;
  if (inst.kind == ClassKind::finite) {
    j["beta"] = inst.finite.beta;
    j["truth_index"] = inst.finite.truth_index;
    json members = json::array();
    for (const Mat& table : inst.finite.members) members.push_back(mat_to_json(table));
    j["members"] = std::move(members);
  } else {
    j["dim"] = inst.linear.dim;
    j["bound"] = inst.linear.bound;
    j["theta_star"] = std::vector<double>(
        inst.linear.theta_star.data(),
        inst.linear.theta_star.data() + inst.linear.theta_star.size());
    json feats = json::array();
    for (const Mat& x : inst.universe.features) feats.push_back(mat_to_json(x));
    j["features"] = std::move(feats);
  }
  return j.dump(2);
}

Instance instance_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ValidationError("instance json: parse failure");
  Instance inst;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite")
      inst.kind = ClassKind::finite;
    else if (kind == "linear")
      inst.kind = ClassKind::linear;
    else
      throw ValidationError("instance json: unknown kind " + kind);
    inst.universe.n_items = j.at("n_items").get<int>();
    inst.universe.n_contexts = j.at("n_contexts").get<int>();
    if (inst.kind == ClassKind::finite) {
      inst.finite.beta = j.at("beta").get<double>();
      inst.finite.truth_index = j.at("truth_index").get<int>();
      for (const json& table : j.at("members"))
        inst.finite.members.push_back(mat_from_json(table));
    } else {
      inst.linear.dim = j.at("dim").get<int>();
      inst.linear.bound = j.at("bound").get<double>();
      const auto ts = j.at("theta_star").get<std::vector<double>>();
      inst.linear.theta_star = Eigen::Map<const Vec>(ts.data(), ts.size());
      for (const json& x : j.at("features"))
        inst.universe.features.push_back(mat_from_json(x));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance json: ") + e.what());
  }
  validate_instance(inst);
  return inst;
}

}  // namespace mnl

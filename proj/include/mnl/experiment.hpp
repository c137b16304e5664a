#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mnl/sim.hpp"
#include "mnl/verify.hpp"

// Batch experiment plumbing: structured configs, seed fan-out, CSV/SVG
// reporting, and the registry of property suites behind verify-lemmas.

namespace mnl {

// Environment recipe. kind "standard" is the fixed benchmark fixture
// (make_standard_fixture; the shape fields are ignored); "finite" and
// "linear" draw a random realizable instance of the given shape with
// `n_atoms` uniform context/reward atoms.
struct EnvSpec {
  std::string kind = "standard";
  std::uint64_t seed = 2026;  // fixture generation seed
  int n_items = 6;
  int capacity = 2;
  int n_contexts = 8;
  int n_atoms = 8;
  int class_size = 20;  // finite kind
  double beta = 0.05;   // finite kind
  int dim = 3;          // linear kind
  double bound = 1.0;   // linear kind
  // Scripted stream handed to the sequential runner (alg2-*): "replay"
  // records per-run draws from the stochastic env, "drifting" slides each
  // atom's rewards sinusoidally across the horizon.
  std::string script = "replay";
};

struct ExperimentConfig {
  // alg1-eps | alg1-logbarrier | alg2-eps | alg2-logbarrier | fgts
  std::string algorithm = "alg1-logbarrier";
  long long horizon = 2000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
  std::string output_dir = "out";
  EnvSpec env;
  // Oracle/schedule knobs for alg1/alg2 (negative = theory schedule).
  double err_constant = 1.0;
  double fixed_eps = -1.0;
  double fixed_gamma = -1.0;
  // FGTS knobs (eta <= 0 = default schedule).
  double fgts_eta = -1.0;
  int fgts_axis_points = 9;
};

// Throws ValidationError naming the offending field, e.g. "env.kind: ...".
void validate_config(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
// FNV-1a digest of the sorted-key JSON dump, 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

StochasticEnv make_env(const EnvSpec& spec);
AdversarialEnv make_script_env(const StochasticEnv& base, const std::string& script,
                               long long horizon, std::uint64_t seed);

// Pinned trace schema: two comment lines (`# config_hash=`, `# seed=`), then
// `t,context_id,assortment,purchase,opt_reward,played_reward,cum_regret,epoch`
// with the assortment written as `+`-joined item ids.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);

// Least-squares slope of log(cum_regret) on log(t) over the checkpoints
// t = T/8, T/4, T/2, T (regret floored at 1e-12; duplicate checkpoints of
// tiny horizons are dropped).
double fitted_loglog_slope(const std::vector<double>& cum_regret);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // failure reason when !ok
  double final_regret = 0.0;
  double slope = 0.0;
  std::string trace_path;  // relative to output_dir
};

struct ExperimentSummary {
  std::string hash;
  std::vector<SeedOutcome> outcomes;  // config order, one per seed
  std::vector<double> mean_curve;     // over succeeded seeds, per round
  std::vector<double> stderr_curve;
  double mean_final_regret = 0.0;
  double stderr_final_regret = 0.0;
  double mean_slope = 0.0;  // slope of the mean curve
  std::string summary_path;
  std::string svg_path;

  int failures() const;
};

// Runs every seed (worker pool, one pure run per seed), returns the traces in
// seed order; failed seeds leave an empty trace and a filled outcome error.
std::vector<Trace> run_seeds(const ExperimentConfig& cfg,
                             std::vector<SeedOutcome>* outcomes = nullptr);

// run_seeds + one trace CSV per seed + summary CSV + SVG regret chart, all
// under cfg.output_dir. Failed seeds are excluded from the aggregates and
// reported in the summary (and on the returned outcomes).
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

void write_summary_csv(const std::string& path, const ExperimentSummary& summary,
                       const ExperimentConfig& cfg);

// One curve per run: mean cumulative regret with a +-stderr band.
struct RegretCurve {
  std::string label;
  std::vector<double> mean;
  std::vector<double> band;  // half-width; empty = no band
};
void write_regret_svg(const std::string& path, const std::vector<RegretCurve>& curves);

// Registry of the quantitative property suites with their pinned sample
// counts and seeds (the counts the acceptance checks state).
struct SuiteSpec {
  std::string name;
  long long count = 0;
  std::uint64_t seed = 0;
  std::function<SuiteResult(long long, std::uint64_t)> fn;
};
const std::vector<SuiteSpec>& lemma_suites();
// Runs every registered suite whose name contains `filter` (all when empty).
std::vector<SuiteResult> run_suites(const std::string& filter = "");

}  // namespace mnl

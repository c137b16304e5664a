// mnl-lab: batch driver for simulations, property suites, decision-coefficient
// audits, and regression-oracle benchmarks. Exit codes: 0 success,
// 1 validation error, 2 property failure, 3 solver non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mnl/errors.hpp"
#include "mnl/experiment.hpp"
#include "mnl/oracles.hpp"
#include "mnl/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kPropertyFailure = 2;
constexpr int kNonConvergence = 3;

struct DecCheckConfig {
  long long fixtures = 50;
  std::uint64_t seed = 7;
  std::string output = "dec_check.csv";
};

struct OracleBenchConfig {
  std::string kind = "finite";  // finite | linear
  std::uint64_t env_seed = 2026;
  long long horizon = 10000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<long long> sizes = {250, 500, 1000, 2000, 4000, 8000};
  long long mc_samples = 100000;
  std::string output = "oracle_bench.csv";
};

json dec_check_to_json(const DecCheckConfig& cfg) {
  json j;
  j["fixtures"] = cfg.fixtures;
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  return j;
}

json oracle_bench_to_json(const OracleBenchConfig& cfg) {
  json j;
  j["kind"] = cfg.kind;
  j["env_seed"] = cfg.env_seed;
  j["horizon"] = cfg.horizon;
  j["seeds"] = cfg.seeds;
  j["sizes"] = cfg.sizes;
  j["mc_samples"] = cfg.mc_samples;
  j["output"] = cfg.output;
  return j;
}

// The config document has one section per subcommand; missing sections take
// the printed defaults.
std::string default_document() {
  json doc;
  doc["experiment"] = json::parse(mnl::config_to_json(mnl::ExperimentConfig{}));
  doc["dec_check"] = dec_check_to_json(DecCheckConfig{});
  doc["oracle_bench"] = oracle_bench_to_json(OracleBenchConfig{});
  return doc.dump(2);
}

json load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mnl::ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw mnl::ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw mnl::ValidationError("config root: expected an object");
  return doc;
}

DecCheckConfig parse_dec_check(const json& section) {
  DecCheckConfig cfg;
  for (const auto& [key, value] : section.items()) {
    const std::string path = "dec_check." + key;
    if (key == "fixtures") {
      if (!value.is_number_integer()) throw mnl::ValidationError(path + ": expected an integer");
      cfg.fixtures = value.get<long long>();
    } else if (key == "seed") {
      if (!value.is_number_integer()) throw mnl::ValidationError(path + ": expected an integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_string()) throw mnl::ValidationError(path + ": expected a string");
      cfg.output = value.get<std::string>();
    } else {
      throw mnl::ValidationError(path + ": unknown field");
    }
  }
  if (cfg.fixtures < 1) throw mnl::ValidationError("dec_check.fixtures: must be >= 1");
  if (cfg.output.empty()) throw mnl::ValidationError("dec_check.output: must not be empty");
  return cfg;
}

OracleBenchConfig parse_oracle_bench(const json& section) {
  OracleBenchConfig cfg;
  for (const auto& [key, value] : section.items()) {
    const std::string path = "oracle_bench." + key;
    const auto need_int = [&](const json& j) {
      if (!j.is_number_integer()) throw mnl::ValidationError(path + ": expected an integer");
      return j.get<long long>();
    };
    if (key == "kind") {
      if (!value.is_string()) throw mnl::ValidationError(path + ": expected a string");
      cfg.kind = value.get<std::string>();
    } else if (key == "env_seed") {
      cfg.env_seed = static_cast<std::uint64_t>(need_int(value));
    } else if (key == "horizon") {
      cfg.horizon = need_int(value);
    } else if (key == "seeds" || key == "sizes") {
      if (!value.is_array() || value.empty())
        throw mnl::ValidationError(path + ": expected a non-empty array");
      if (key == "seeds") cfg.seeds.clear();
      else cfg.sizes.clear();
      for (const auto& item : value) {
        if (!item.is_number_integer())
          throw mnl::ValidationError(path + ": expected integers");
        if (key == "seeds") cfg.seeds.push_back(item.get<std::uint64_t>());
        else cfg.sizes.push_back(item.get<long long>());
      }
    } else if (key == "mc_samples") {
      cfg.mc_samples = need_int(value);
    } else if (key == "output") {
      if (!value.is_string()) throw mnl::ValidationError(path + ": expected a string");
      cfg.output = value.get<std::string>();
    } else {
      throw mnl::ValidationError(path + ": unknown field");
    }
  }
  if (cfg.kind != "finite" && cfg.kind != "linear")
    throw mnl::ValidationError("oracle_bench.kind: unknown kind '" + cfg.kind + "'");
  if (cfg.horizon < 1) throw mnl::ValidationError("oracle_bench.horizon: must be >= 1");
  if (cfg.mc_samples < 1) throw mnl::ValidationError("oracle_bench.mc_samples: must be >= 1");
  for (long long n : cfg.sizes)
    if (n < 1) throw mnl::ValidationError("oracle_bench.sizes: must be >= 1");
  if (cfg.output.empty()) throw mnl::ValidationError("oracle_bench.output: must not be empty");
  return cfg;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

int cmd_simulate(const std::string& config_path) {
  const json doc = load_document(config_path);
  if (!doc.contains("experiment"))
    throw mnl::ValidationError("experiment: section missing from config");
  const mnl::ExperimentConfig cfg = mnl::config_from_json(doc["experiment"].dump());
  const mnl::ExperimentSummary summary = mnl::run_experiment(cfg);

  std::cout << "algorithm " << cfg.algorithm << ", horizon " << cfg.horizon << ", "
            << cfg.seeds.size() << " seed(s), config hash " << summary.hash << "\n";
  for (const mnl::SeedOutcome& o : summary.outcomes) {
    if (o.ok)
      std::cout << "  seed " << o.seed << ": final regret " << fmt(o.final_regret)
                << ", log-log slope " << fmt(o.slope) << "\n";
    else
      std::cout << "  seed " << o.seed << ": FAILED (" << o.error << ")\n";
  }
  const int failed = summary.failures();
  if (failed > 0)
    std::cout << "warning: " << failed << " of " << summary.outcomes.size()
              << " seeds failed and are excluded from the summary\n";
  std::cout << "mean final regret " << fmt(summary.mean_final_regret) << " +- "
            << fmt(summary.stderr_final_regret) << " (stderr), mean-curve slope "
            << fmt(summary.mean_slope) << "\n";
  std::cout << "wrote " << summary.summary_path << " and " << summary.svg_path << "\n";
  if (failed == static_cast<int>(summary.outcomes.size())) {
    // Nothing succeeded; surface the first failure's nature in the exit code.
    for (const mnl::SeedOutcome& o : summary.outcomes)
      if (!o.ok && o.error.find("converge") != std::string::npos) return kNonConvergence;
    return kValidation;
  }
  return kOk;
}

int cmd_verify_lemmas(const std::string& suite_filter) {
  const std::vector<mnl::SuiteResult> results = mnl::run_suites(suite_filter);
  if (results.empty()) {
    std::cerr << "no suite matches '" << suite_filter << "'\n";
    return kValidation;
  }
  bool all_pass = true;
  for (const mnl::SuiteResult& res : results) {
    std::cout << (res.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(20)
              << res.name << " checks=" << res.checks
              << " worst_margin=" << fmt(res.worst_margin) << " tol=" << res.tolerance;
    if (!res.detail.empty()) std::cout << "  [" << res.detail << "]";
    std::cout << "\n";
    all_pass = all_pass && res.pass;
  }
  return all_pass ? kOk : kPropertyFailure;
}

int cmd_dec_check(const DecCheckConfig& cfg) {
  const std::vector<mnl::DecCheckRow> rows = mnl::dec_check_rows(cfg.fixtures, cfg.seed);
  std::ofstream os(cfg.output, std::ios::binary);
  if (!os) throw mnl::ValidationError("cannot open output file: " + cfg.output);
  os << "fixture,kind,gamma,eps,estimate,bound,margin\n";
  double worst = 1e300;
  for (const mnl::DecCheckRow& row : rows) {
    os << row.fixture << ',' << row.kind << ',' << fmt(row.gamma) << ','
       << (row.eps < 0.0 ? std::string() : fmt(row.eps)) << ',' << fmt(row.estimate)
       << ',' << fmt(row.bound) << ',' << fmt(row.margin) << "\n";
    worst = std::min(worst, row.margin);
  }
  std::cout << "wrote " << cfg.output << " (" << rows.size()
            << " fixtures), worst margin " << fmt(worst) << "\n";
  if (worst < -1e-6) {
    std::cout << "a decision-coefficient estimate exceeded its closed-form bound\n";
    return kPropertyFailure;
  }
  return kOk;
}

int cmd_oracle_bench(const OracleBenchConfig& cfg) {
  using namespace mnl;
  StochasticEnv env;
  if (cfg.kind == "finite") {
    env = make_standard_fixture(cfg.env_seed);
  } else {
    EnvSpec spec;
    spec.kind = "linear";
    spec.seed = cfg.env_seed;
    env = make_env(spec);
  }
  const Instance& inst = env.instance;
  const int cap = env.capacity;

  std::ofstream os(cfg.output, std::ios::binary);
  if (!os) throw mnl::ValidationError("cannot open output file: " + cfg.output);
  os << "mode,n_or_T,seed,measured,bound\n";

  // Offline: ERM excess log loss vs sample size, shared Monte-Carlo eval set.
  Rng eval_rng = Rng::seeded(cfg.env_seed).split(4);
  const std::vector<RegressionSample> eval_set =
      sample_regression_stream(inst, cap, cfg.mc_samples, eval_rng);
  std::vector<double> mean_excess(cfg.sizes.size(), 0.0);
  for (size_t ni = 0; ni < cfg.sizes.size(); ++ni) {
    const long long n = cfg.sizes[ni];
    for (std::uint64_t seed : cfg.seeds) {
      Rng rng = Rng::seeded(seed).split(4);
      const std::vector<RegressionSample> train =
          sample_regression_stream(inst, cap, n, rng);
      double excess = 0.0;
      if (inst.kind == ClassKind::finite) {
        const int fit = erm_fit_finite(inst.finite, inst.universe, train);
        excess = finite_excess_log_loss(inst, fit, eval_set);
      } else {
        const Vec theta = erm_fit_linear(inst.linear, inst.universe, train);
        excess = linear_excess_log_loss(inst, theta, eval_set);
      }
      os << "offline," << n << ',' << seed << ',' << fmt(excess) << ",\n";
      mean_excess[ni] += excess / static_cast<double>(cfg.seeds.size());
    }
  }

  // Log-log slope of the mean excess-loss curve (expected near -1).
  double slope = 0.0;
  if (cfg.sizes.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t ni = 0; ni < cfg.sizes.size(); ++ni) {
      const double x = std::log(static_cast<double>(cfg.sizes[ni]));
      const double y = std::log(std::max(mean_excess[ni], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(cfg.sizes.size());
    slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  }

  // Online: measured oracle regret vs its closed-form budget.
  int bound_misses = 0;
  for (std::uint64_t seed : cfg.seeds) {
    OracleRunResult run;
    if (inst.kind == ClassKind::finite) {
      const double lr = hedge_default_lr(static_cast<int>(inst.finite.size()),
                                         static_cast<double>(cfg.horizon), cap,
                                         inst.finite.beta);
      run = hedge_regret_run(inst, cap, cfg.horizon, lr, seed);
    } else {
      run = ogd_regret_run(inst, cap, cfg.horizon, seed);
    }
    os << "online," << cfg.horizon << ',' << seed << ',' << fmt(run.measured_regret)
       << ',' << fmt(run.bound) << "\n";
    if (run.measured_regret > run.bound) ++bound_misses;
  }

  std::cout << "wrote " << cfg.output << "; offline log-log slope " << fmt(slope)
            << "; online bound misses " << bound_misses << "/" << cfg.seeds.size()
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MNL assortment-bandit lab: simulations, property suites, and benchmarks"};
  app.require_subcommand(0, 1);

  bool print_config = false;
  app.add_flag("--print-config", print_config,
               "print the full default config document and exit");

  std::string sim_config;
  CLI::App* simulate = app.add_subcommand("simulate", "run a configured experiment");
  simulate->add_option("config", sim_config, "JSON config file (experiment section)")
      ->required();

  std::string suite_filter;
  CLI::App* verify = app.add_subcommand("verify-lemmas", "run the property suites");
  verify->add_option("--suite", suite_filter, "only suites whose name contains this");

  std::string dec_config_path;
  DecCheckConfig dec_cfg;
  CLI::App* dec = app.add_subcommand(
      "dec-check", "estimate decision coefficients against their bounds");
  dec->add_option("config", dec_config_path, "JSON config file (dec_check section)");
  dec->add_option("--fixtures", dec_cfg.fixtures, "number of random fixtures");
  dec->add_option("--seed", dec_cfg.seed, "fixture seed");
  dec->add_option("--output", dec_cfg.output, "output CSV path");

  std::string bench_config_path;
  CLI::App* bench = app.add_subcommand(
      "oracle-bench", "offline/online regression-oracle benchmarks");
  bench->add_option("config", bench_config_path, "JSON config file (oracle_bench section)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_config) {
      std::cout << default_document() << "\n";
      return kOk;
    }
    if (simulate->parsed()) return cmd_simulate(sim_config);
    if (verify->parsed()) return cmd_verify_lemmas(suite_filter);
    if (dec->parsed()) {
      DecCheckConfig cfg;
      if (!dec_config_path.empty()) {
        const nlohmann::json doc = load_document(dec_config_path);
        if (doc.contains("dec_check")) cfg = parse_dec_check(doc["dec_check"]);
      }
      // Flags override the file.
      if (dec->get_option("--fixtures")->count() > 0) cfg.fixtures = dec_cfg.fixtures;
      if (dec->get_option("--seed")->count() > 0) cfg.seed = dec_cfg.seed;
      if (dec->get_option("--output")->count() > 0) cfg.output = dec_cfg.output;
      return cmd_dec_check(cfg);
    }
    if (bench->parsed()) {
      OracleBenchConfig cfg;
      if (!bench_config_path.empty()) {
        const nlohmann::json doc = load_document(bench_config_path);
        if (doc.contains("oracle_bench")) cfg = parse_oracle_bench(doc["oracle_bench"]);
      }
      return cmd_oracle_bench(cfg);
    }
    std::cout << app.help() << "\n";
    return kOk;
  } catch (const mnl::SolverError& e) {
    std::cerr << "solver non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const mnl::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}

#include "mnl/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "mnl/assortment.hpp"
#include "mnl/errors.hpp"
#include "mnl/policies.hpp"

namespace mnl {

namespace {

using nlohmann::json;

const std::set<std::string>& algorithm_names() {
  static const std::set<std::string> names = {"alg1-eps", "alg1-logbarrier", "alg2-eps",
                                              "alg2-logbarrier", "fgts"};
  return names;
}

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
  throw ValidationError(path + ": " + why);
}

// ---- JSON field readers with path-qualified errors ----

double need_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail_field(path, "expected a number");
  return j.get<double>();
}

long long need_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail_field(path, "expected an integer");
  return j.get<long long>();
}

std::string need_str(const json& j, const std::string& path) {
  if (!j.is_string()) fail_field(path, "expected a string");
  return j.get<std::string>();
}

void parse_env(const json& obj, const std::string& prefix, EnvSpec& env) {
  if (!obj.is_object()) fail_field(prefix, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string path = prefix + "." + key;
    if (key == "kind") env.kind = need_str(value, path);
    else if (key == "seed") env.seed = static_cast<std::uint64_t>(need_int(value, path));
    else if (key == "n_items") env.n_items = static_cast<int>(need_int(value, path));
    else if (key == "capacity") env.capacity = static_cast<int>(need_int(value, path));
    else if (key == "n_contexts") env.n_contexts = static_cast<int>(need_int(value, path));
    else if (key == "n_atoms") env.n_atoms = static_cast<int>(need_int(value, path));
    else if (key == "class_size") env.class_size = static_cast<int>(need_int(value, path));
    else if (key == "beta") env.beta = need_num(value, path);
    else if (key == "dim") env.dim = static_cast<int>(need_int(value, path));
    else if (key == "bound") env.bound = need_num(value, path);
    else if (key == "script") env.script = need_str(value, path);
    else fail_field(path, "unknown field");
  }
}

json env_to_json(const EnvSpec& env) {
  json j;
  j["kind"] = env.kind;
  j["seed"] = env.seed;
  j["n_items"] = env.n_items;
  j["capacity"] = env.capacity;
  j["n_contexts"] = env.n_contexts;
  j["n_atoms"] = env.n_atoms;
  j["class_size"] = env.class_size;
  j["beta"] = env.beta;
  j["dim"] = env.dim;
  j["bound"] = env.bound;
  j["script"] = env.script;
  return j;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string joined_items(const Assortment& S) {
  std::string out;
  for (size_t k = 0; k < S.items.size(); ++k) {
    if (k > 0) out += '+';
    out += std::to_string(S.items[k]);
  }
  return out;
}

// Commas would break the CSV row; the messages are free-form what() strings.
std::string strip_delimiters(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n') c = ';';
  return text;
}

Trace run_one(const ExperimentConfig& cfg, const StochasticEnv& env, std::uint64_t seed) {
  if (cfg.algorithm == "fgts")
    return run_fgts(env, cfg.horizon, seed, cfg.fgts_eta, cfg.fgts_axis_points);
  if (cfg.algorithm == "alg1-eps" || cfg.algorithm == "alg1-logbarrier") {
    OracleConfig oracle;
    oracle.err_constant = cfg.err_constant;
    oracle.fixed_eps = cfg.fixed_eps;
    oracle.fixed_gamma = cfg.fixed_gamma;
    const StrategyKind kind = cfg.algorithm == "alg1-eps" ? StrategyKind::eps_greedy
                                                          : StrategyKind::log_barrier;
    return run_alg1(env, kind, cfg.horizon, seed, oracle);
  }
  const AdversarialEnv adv = make_script_env(env, cfg.env.script, cfg.horizon, seed);
  const StrategyKind kind = cfg.algorithm == "alg2-eps" ? StrategyKind::eps_greedy
                                                        : StrategyKind::log_barrier;
  return run_alg2(adv, kind, cfg.horizon, seed, cfg.fixed_gamma, cfg.fixed_eps);
}

// Mean and standard error of the mean over the sample values.
std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (algorithm_names().count(cfg.algorithm) == 0)
    fail_field("algorithm", "unknown algorithm '" + cfg.algorithm + "'");
  if (cfg.horizon < 1) fail_field("horizon", "must be >= 1");
  if (cfg.seeds.empty()) fail_field("seeds", "need at least one seed");
  std::set<std::uint64_t> seen;
  for (std::uint64_t s : cfg.seeds)
    if (!seen.insert(s).second)
      fail_field("seeds", "duplicate seed " + std::to_string(s));
  if (cfg.output_dir.empty()) fail_field("output_dir", "must not be empty");
  if (cfg.err_constant <= 0.0) fail_field("err_constant", "must be positive");
  if (cfg.fixed_eps != -1.0 && (cfg.fixed_eps <= 0.0 || cfg.fixed_eps > 1.0))
    fail_field("fixed_eps", "must lie in (0,1] or be -1");
  if (cfg.fixed_gamma != -1.0 && cfg.fixed_gamma <= 0.0)
    fail_field("fixed_gamma", "must be positive or -1");
  if (cfg.fgts_eta != -1.0 && (cfg.fgts_eta <= 0.0 || cfg.fgts_eta > 1.0))
    fail_field("fgts_eta", "must lie in (0,1] or be -1");
  if (cfg.fgts_axis_points < 2) fail_field("fgts_axis_points", "must be >= 2");

  const EnvSpec& env = cfg.env;
  if (env.kind != "standard" && env.kind != "finite" && env.kind != "linear")
    fail_field("env.kind", "unknown kind '" + env.kind + "'");
  if (env.script != "replay" && env.script != "drifting")
    fail_field("env.script", "unknown script '" + env.script + "'");
  if (env.kind != "standard") {
    if (env.n_items < 1) fail_field("env.n_items", "must be >= 1");
    if (env.capacity < 1 || env.capacity > env.n_items)
      fail_field("env.capacity", "must lie in [1, n_items]");
    if (env.n_contexts < 1) fail_field("env.n_contexts", "must be >= 1");
    if (env.n_atoms < 1) fail_field("env.n_atoms", "must be >= 1");
    if (env.beta <= 0.0 || env.beta >= 1.0) fail_field("env.beta", "must lie in (0,1)");
    if (env.kind == "finite" && env.class_size < 1)
      fail_field("env.class_size", "must be >= 1");
    if (env.kind == "linear") {
      if (env.dim < 1) fail_field("env.dim", "must be >= 1");
      if (env.bound <= 0.0) fail_field("env.bound", "must be positive");
    }
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config root: expected an object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "algorithm") cfg.algorithm = need_str(value, key);
    else if (key == "horizon") cfg.horizon = need_int(value, key);
    else if (key == "seeds") {
      if (!value.is_array() || value.empty()) fail_field(key, "expected a non-empty array");
      cfg.seeds.clear();
      for (size_t i = 0; i < value.size(); ++i)
        cfg.seeds.push_back(static_cast<std::uint64_t>(
            need_int(value[i], key + "[" + std::to_string(i) + "]")));
    } else if (key == "output_dir") cfg.output_dir = need_str(value, key);
    else if (key == "env") parse_env(value, key, cfg.env);
    else if (key == "err_constant") cfg.err_constant = need_num(value, key);
    else if (key == "fixed_eps") cfg.fixed_eps = need_num(value, key);
    else if (key == "fixed_gamma") cfg.fixed_gamma = need_num(value, key);
    else if (key == "fgts_eta") cfg.fgts_eta = need_num(value, key);
    else if (key == "fgts_axis_points")
      cfg.fgts_axis_points = static_cast<int>(need_int(value, key));
    else fail_field(key, "unknown field");
  }
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["algorithm"] = cfg.algorithm;
  j["horizon"] = cfg.horizon;
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  j["env"] = env_to_json(cfg.env);
  j["err_constant"] = cfg.err_constant;
  j["fixed_eps"] = cfg.fixed_eps;
  j["fixed_gamma"] = cfg.fixed_gamma;
  j["fgts_eta"] = cfg.fgts_eta;
  j["fgts_axis_points"] = cfg.fgts_axis_points;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Hash what was run, not where it was written: the same experiment moved to
  // a different output directory must keep its identity (and its trace bytes).
  ExperimentConfig canonical = cfg;
  canonical.output_dir.clear();
  // nlohmann objects iterate in sorted key order, so the dump is canonical.
  const std::string dump = config_to_json(canonical);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

StochasticEnv make_env(const EnvSpec& spec) {
  if (spec.kind == "standard") return make_standard_fixture(spec.seed);
  if (spec.kind != "finite" && spec.kind != "linear")
    fail_field("env.kind", "unknown kind '" + spec.kind + "'");

  Rng rng = Rng::seeded(spec.seed);
  StochasticEnv env;
  env.capacity = spec.capacity;
  const ClassKind kind = spec.kind == "finite" ? ClassKind::finite : ClassKind::linear;
  const int size = spec.kind == "finite" ? spec.class_size : spec.dim;
  env.instance = gen_random_instance(kind, spec.n_items, spec.n_contexts, size, rng,
                                     spec.beta, spec.bound);
  for (int a = 0; a < spec.n_atoms; ++a) {
    EnvAtom atom;
    atom.context_id = a % spec.n_contexts;
    atom.rewards = Vec(spec.n_items);
    for (int i = 0; i < spec.n_items; ++i) atom.rewards(i) = rng.uniform(0.0, 1.0);
    atom.prob = 1.0 / spec.n_atoms;
    env.atoms.push_back(std::move(atom));
  }
  validate_env(env);
  return env;
}

AdversarialEnv make_script_env(const StochasticEnv& base, const std::string& script,
                               long long horizon, std::uint64_t seed) {
  validate_env(base);
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  AdversarialEnv adv;
  adv.instance = base.instance;
  adv.capacity = base.capacity;
  adv.script.reserve(static_cast<size_t>(horizon));
  const int n = base.instance.universe.n_items;

  if (script == "replay") {
    // Record the stochastic stream this run-seed would have seen. The script
    // lane is distinct from every lane the runners split off the same seed.
    Rng rng = Rng::seeded(seed).split(5);
    for (long long t = 1; t <= horizon; ++t) {
      const EnvRound round = env_step(base, t, rng);
      adv.script.emplace_back(round.context_id, round.rewards);
    }
  } else if (script == "drifting") {
    // Deterministic drift: atoms cycle and each reward slides sinusoidally
    // across the horizon, phase-shifted per item.
    const double pi = std::acos(-1.0);
    for (long long t = 1; t <= horizon; ++t) {
      const EnvAtom& atom = base.atoms[static_cast<size_t>((t - 1) % base.atoms.size())];
      Vec rewards = atom.rewards;
      for (int i = 0; i < n; ++i) {
        const double phase =
            2.0 * pi * (static_cast<double>(t) / static_cast<double>(horizon) +
                        static_cast<double>(i) / static_cast<double>(n));
        rewards(i) = std::clamp(atom.rewards(i) + 0.3 * std::sin(phase), 0.0, 1.0);
      }
      adv.script.emplace_back(atom.context_id, std::move(rewards));
    }
  } else {
    fail_field("env.script", "unknown script '" + script + "'");
  }
  validate_env(adv, horizon);
  return adv;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "# config_hash=" << trace.config_hash << "\n";
  os << "# seed=" << trace.seed << "\n";
  os << "t,context_id,assortment,purchase,opt_reward,played_reward,cum_regret,epoch\n";
  for (const TraceRow& row : trace.rows) {
    os << row.t << ',' << row.context_id << ',' << joined_items(row.played) << ','
       << row.purchase << ',' << format_double(row.opt_reward) << ','
       << format_double(row.played_reward) << ',' << format_double(row.cum_regret) << ','
       << row.epoch << "\n";
  }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream os(path, std::ios::binary);  // binary: byte-identical reruns
  if (!os) throw ValidationError("cannot open trace file for writing: " + path);
  write_trace_csv(os, trace);
}

double fitted_loglog_slope(const std::vector<double>& cum_regret) {
  const long long T = static_cast<long long>(cum_regret.size());
  if (T < 2) return 0.0;
  std::vector<long long> checkpoints;
  for (int denom : {8, 4, 2, 1}) {
    const long long t = std::max<long long>(1, T / denom);
    if (checkpoints.empty() || checkpoints.back() != t) checkpoints.push_back(t);
  }
  if (checkpoints.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (long long t : checkpoints) {
    const double x = std::log(static_cast<double>(t));
    const double y = std::log(std::max(cum_regret[static_cast<size_t>(t - 1)], 1e-12));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(checkpoints.size());
  const double var = sxx - sx * sx / m;
  if (var <= 0.0) return 0.0;
  return (sxy - sx * sy / m) / var;
}

int ExperimentSummary::failures() const {
  int n = 0;
  for (const SeedOutcome& o : outcomes)
    if (!o.ok) ++n;
  return n;
}

std::vector<Trace> run_seeds(const ExperimentConfig& cfg,
                             std::vector<SeedOutcome>* outcomes) {
  validate_config(cfg);
  const StochasticEnv env = make_env(cfg.env);
  const std::string hash = config_hash(cfg);
  const size_t n = cfg.seeds.size();
  std::vector<Trace> traces(n);
  std::vector<SeedOutcome> outs(n);

  // Worker pool over seed indices; each run is a pure function of
  // (config, seed), so the assignment of seeds to workers cannot matter.
  std::atomic<size_t> next{0};
  const auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      outs[i].seed = cfg.seeds[i];
      try {
        traces[i] = run_one(cfg, env, cfg.seeds[i]);
        traces[i].config_hash = hash;
        outs[i].ok = true;
        outs[i].final_regret = traces[i].final_regret();
        std::vector<double> curve(traces[i].rows.size());
        for (size_t t = 0; t < curve.size(); ++t) curve[t] = traces[i].rows[t].cum_regret;
        outs[i].slope = fitted_loglog_slope(curve);
      } catch (const std::exception& e) {
        outs[i].ok = false;
        outs[i].error = e.what();
      }
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const size_t workers = std::min(n, static_cast<size_t>(hw == 0 ? 1 : hw));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& th : pool) th.join();

  if (outcomes != nullptr) *outcomes = std::move(outs);
  return traces;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  ExperimentSummary summary;
  summary.hash = config_hash(cfg);
  std::vector<Trace> traces = run_seeds(cfg, &summary.outcomes);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  for (size_t i = 0; i < traces.size(); ++i) {
    if (!summary.outcomes[i].ok) continue;
    const std::string name = "trace_" + cfg.algorithm + "_seed" +
                             std::to_string(cfg.seeds[i]) + ".csv";
    write_trace_csv((fs::path(cfg.output_dir) / name).string(), traces[i]);
    summary.outcomes[i].trace_path = name;
  }

  // Single-threaded reduction over the succeeded traces.
  const size_t T = static_cast<size_t>(cfg.horizon);
  std::vector<double> finals, slopes;
  summary.mean_curve.assign(T, 0.0);
  summary.stderr_curve.assign(T, 0.0);
  std::vector<const Trace*> ok_traces;
  for (size_t i = 0; i < traces.size(); ++i)
    if (summary.outcomes[i].ok) {
      ok_traces.push_back(&traces[i]);
      finals.push_back(summary.outcomes[i].final_regret);
      slopes.push_back(summary.outcomes[i].slope);
    }
  if (!ok_traces.empty()) {
    std::vector<double> at_t(ok_traces.size());
    for (size_t t = 0; t < T; ++t) {
      for (size_t k = 0; k < ok_traces.size(); ++k)
        at_t[k] = ok_traces[k]->rows[t].cum_regret;
      const auto [mean, se] = mean_stderr(at_t);
      summary.mean_curve[t] = mean;
      summary.stderr_curve[t] = se;
    }
    const auto [mf, sf] = mean_stderr(finals);
    summary.mean_final_regret = mf;
    summary.stderr_final_regret = sf;
    summary.mean_slope = fitted_loglog_slope(summary.mean_curve);
  }

  const std::string summary_name = "summary_" + cfg.algorithm + ".csv";
  summary.summary_path = (fs::path(cfg.output_dir) / summary_name).string();
  write_summary_csv(summary.summary_path, summary, cfg);

  RegretCurve curve{cfg.algorithm, summary.mean_curve, summary.stderr_curve};
  const std::string svg_name = "regret_" + cfg.algorithm + ".svg";
  summary.svg_path = (fs::path(cfg.output_dir) / svg_name).string();
  write_regret_svg(summary.svg_path, {curve});
  return summary;
}

void write_summary_csv(const std::string& path, const ExperimentSummary& summary,
                       const ExperimentConfig& cfg) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open summary file for writing: " + path);
  os << "# config_hash=" << summary.hash << "\n";
  os << "# algorithm=" << cfg.algorithm << "\n";
  os << "# horizon=" << cfg.horizon << "\n";
  os << "row,seed,final_regret,loglog_slope,note\n";
  for (const SeedOutcome& o : summary.outcomes) {
    if (o.ok) {
      os << "seed," << o.seed << ',' << format_double(o.final_regret) << ','
         << format_double(o.slope) << ",\n";
    } else {
      os << "seed," << o.seed << ",,,failed: " << strip_delimiters(o.error) << "\n";
    }
  }
  const int failed = summary.failures();
  std::string note;
  if (failed > 0)
    note = std::to_string(failed) + " of " + std::to_string(summary.outcomes.size()) +
           " seeds failed and are excluded";
  os << "mean," << ',' << format_double(summary.mean_final_regret) << ','
     << format_double(summary.mean_slope) << ',' << note << "\n";
  os << "stderr," << ',' << format_double(summary.stderr_final_regret) << ",,\n";
}

void write_regret_svg(const std::string& path, const std::vector<RegretCurve>& curves) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open svg file for writing: " + path);

  constexpr double width = 880, height = 560;
  constexpr double ml = 80, mr = 30, mt = 40, mb = 64;
  const double pw = width - ml - mr, ph = height - mt - mb;

  size_t T = 0;
  double ymax = 1e-9;
  for (const RegretCurve& c : curves) {
    T = std::max(T, c.mean.size());
    for (size_t t = 0; t < c.mean.size(); ++t) {
      const double band = t < c.band.size() ? c.band[t] : 0.0;
      ymax = std::max(ymax, c.mean[t] + band);
    }
  }
  ymax *= 1.05;
  const double xmax = static_cast<double>(std::max<size_t>(T, 2));
  const auto X = [&](double t) { return ml + pw * (t / xmax); };
  const auto Y = [&](double v) { return mt + ph * (1.0 - v / ymax); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr int palette_size = 6;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Grid and tick labels.
  os << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double tx = xmax * k / 5.0;
    const double vy = ymax * k / 5.0;
    os << "<line x1=\"" << X(tx) << "\" y1=\"" << mt << "\" x2=\"" << X(tx) << "\" y2=\""
       << mt + ph << "\" stroke=\"#ddd\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << Y(vy) << "\" x2=\"" << ml + pw
       << "\" y2=\"" << Y(vy) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << X(tx) << "\" y=\"" << mt + ph + 20
       << "\" text-anchor=\"middle\">" << static_cast<long long>(tx) << "</text>\n";
    std::ostringstream lab;
    lab << std::setprecision(4) << vy;
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(vy) + 4
       << "\" text-anchor=\"end\">" << lab.str() << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
     << "\" text-anchor=\"middle\">round t</text>\n";
  os << "<text x=\"20\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << mt + ph / 2
     << ")\">cumulative regret</text>\n";
  os << "</g>\n";

  // Axes frame.
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
     << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (size_t c = 0; c < curves.size(); ++c) {
    const RegretCurve& curve = curves[c];
    if (curve.mean.empty()) continue;
    const char* color = palette[c % palette_size];
    const size_t n = curve.mean.size();
    const size_t stride = std::max<size_t>(1, n / 400);

    if (!curve.band.empty()) {
      os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" "
         << "points=\"";
      for (size_t t = 0; t < n; t += stride)
        os << X(static_cast<double>(t + 1)) << ','
           << Y(curve.mean[t] + (t < curve.band.size() ? curve.band[t] : 0.0)) << ' ';
      for (size_t t = n; t-- > 0;) {
        if (t % stride != 0) continue;
        os << X(static_cast<double>(t + 1)) << ','
           << Y(std::max(0.0, curve.mean[t] - (t < curve.band.size() ? curve.band[t] : 0.0)))
           << ' ';
      }
      os << "\"/>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t t = 0; t < n; t += stride)
      os << X(static_cast<double>(t + 1)) << ',' << Y(curve.mean[t]) << ' ';
    if ((n - 1) % stride != 0)
      os << X(static_cast<double>(n)) << ',' << Y(curve.mean[n - 1]) << ' ';
    os << "\"/>\n";

    // Legend row.
    const double ly = mt + 18 + 20 * static_cast<double>(c);
    os << "<rect x=\"" << ml + 12 << "\" y=\"" << ly - 10
       << "\" width=\"14\" height=\"14\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << ml + 32 << "\" y=\"" << ly + 2
       << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#333\">" << curve.label
       << "</text>\n";
  }
  os << "</svg>\n";
}

const std::vector<SuiteSpec>& lemma_suites() {
  static const std::vector<SuiteSpec> suites = {
      {"reward-lipschitz", 100000, 11, check_reward_lipschitz},
      {"choice-distance-sandwich", 100000, 12, check_choice_sandwich},
      {"h-map-expansion", 100000, 13, check_h_jacobian_bound},
      {"one-central-identity", 10000, 14, check_one_central},
      {"choice-axioms", 100000, 15, check_choice_axioms},
      {"solver-equivalence", 10000, 16, check_solver_equivalence},
      {"gradient-bound", 100000, 17, check_gradient_bound},
      {"gradient-finite-difference", 100000, 18, check_gradient_fd},
      {"loss-convexity", 20000, 19, check_loss_convexity},
      {"barrier-low-regret", 200, 20, check_barrier_low_regret},
      {"barrier-dispersion", 200, 21, check_barrier_dispersion},
      {"barrier-mutation", 40, 22, check_barrier_mutation},
      {"dec-soundness", 50, 23, check_dec_soundness},
  };
  return suites;
}

std::vector<SuiteResult> run_suites(const std::string& filter) {
  std::vector<SuiteResult> results;
  for (const SuiteSpec& spec : lemma_suites()) {
    if (!filter.empty() && spec.name.find(filter) == std::string::npos) continue;
    results.push_back(spec.fn(spec.count, spec.seed));
  }
  return results;
}

}  // namespace mnl

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mnl/core.hpp"
#include "mnl/function_classes.hpp"
#include "mnl/rng.hpp"

namespace mnl {

// One support point of the context/reward mixture: with probability `prob`
// the round presents context atom `context_id` and reward vector `rewards`.
struct EnvAtom {
  int context_id = 0;
  Vec rewards;
  double prob = 0.0;
};

struct StochasticEnv {
  Instance instance;  // carries the truth member/theta and the context universe
  int capacity = 1;
  std::vector<EnvAtom> atoms;
};

// Scripted sequence of (context, rewards) pairs; purchases still follow the
// true choice model, only the context/reward stream is adversary-controlled.
struct AdversarialEnv {
  Instance instance;
  int capacity = 1;
  std::vector<std::pair<int, Vec>> script;
};

void validate_env(const StochasticEnv& env);
void validate_env(const AdversarialEnv& env, long long horizon);

struct EnvRound {
  int atom = 0;  // atom index (stochastic) or t-1 (adversarial); cache key
  int context_id = 0;
  Vec rewards;
};

EnvRound env_step(const StochasticEnv& env, long long t, Rng& rng);
EnvRound env_step(const AdversarialEnv& env, long long t, Rng& rng);

struct TraceRow {
  long long t = 0;
  int context_id = 0;
  Assortment played;
  int purchase = 0;       // 0 = no purchase
  double opt_reward = 0;  // best assortment value under the true model
  double played_reward = 0;  // expected reward of the played set, true model
  double sampled_reward = 0; // realized r_{i_t} (0 on no purchase)
  double cum_regret = 0;
  int epoch = 0;  // epoch index for epoch-based runs, 0 otherwise
};

struct Trace {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<TraceRow> rows;
  // Cumulative log-loss regret of the online oracle, one entry per round
  // (filled by the online-oracle runner only).
  std::vector<double> oracle_log_regret;

  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
};

void append_round(Trace& trace, long long t, const EnvRound& round, const Assortment& played,
                  int purchase, double opt_reward, double played_reward, int epoch);

// Finite-class benchmark environment: N=6 items, capacity 2, 20 members over
// 8 context atoms, member 0 the truth. The other members sit at geometrically
// graded distances from the truth so that sample-based fits improve steadily
// instead of snapping to the truth at once.
StochasticEnv make_standard_fixture(std::uint64_t seed = 2026);

}  // namespace mnl

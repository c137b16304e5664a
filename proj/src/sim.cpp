#include "mnl/sim.hpp"

#include <cmath>

#include "mnl/errors.hpp"

namespace mnl {

void validate_env(const StochasticEnv& env) {
  validate_instance(env.instance);
  if (env.capacity < 1 || env.capacity > env.instance.universe.n_items)
    throw ValidationError("capacity out of range");
  if (env.atoms.empty()) throw ValidationError("environment needs at least one atom");
  double total = 0.0;
  for (const auto& atom : env.atoms) {
    if (atom.context_id < 0 || atom.context_id >= env.instance.universe.n_contexts)
      throw ValidationError("atom context id out of range");
    if (atom.rewards.size() != env.instance.universe.n_items)
      throw ValidationError("atom reward vector has wrong length");
    validate_unit_range(atom.rewards, "reward");
    if (atom.prob < 0.0) throw ValidationError("atom probability negative");
    total += atom.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("atom probabilities must sum to 1");
}

void validate_env(const AdversarialEnv& env, long long horizon) {
  validate_instance(env.instance);
  if (env.capacity < 1 || env.capacity > env.instance.universe.n_items)
    throw ValidationError("capacity out of range");
  if (static_cast<long long>(env.script.size()) < horizon)
    throw ValidationError("script shorter than the horizon");
  for (const auto& [context_id, rewards] : env.script) {
    if (context_id < 0 || context_id >= env.instance.universe.n_contexts)
      throw ValidationError("script context id out of range");
    if (rewards.size() != env.instance.universe.n_items)
      throw ValidationError("script reward vector has wrong length");
    validate_unit_range(rewards, "reward");
  }
}

EnvRound env_step(const StochasticEnv& env, long long t, Rng& rng) {
  (void)t;
  Vec probs(static_cast<int>(env.atoms.size()));
  for (int a = 0; a < probs.size(); ++a) probs(a) = env.atoms[a].prob;
  const int a = rng.categorical(probs);
  return EnvRound{a, env.atoms[a].context_id, env.atoms[a].rewards};
}

EnvRound env_step(const AdversarialEnv& env, long long t, Rng& rng) {
  (void)rng;
  if (t < 1 || t > static_cast<long long>(env.script.size()))
    throw ValidationError("script exhausted: no round " + std::to_string(t));
  const auto& [context_id, rewards] = env.script[static_cast<size_t>(t - 1)];
  return EnvRound{static_cast<int>(t - 1), context_id, rewards};
}

void append_round(Trace& trace, long long t, const EnvRound& round, const Assortment& played,
                  int purchase, double opt_reward, double played_reward, int epoch) {
  TraceRow row;
  row.t = t;
  row.context_id = round.context_id;
  row.played = played;
  row.purchase = purchase;
  row.opt_reward = opt_reward;
  row.played_reward = played_reward;
  row.sampled_reward = purchase > 0 ? round.rewards(purchase - 1) : 0.0;
  const double prev = trace.rows.empty() ? 0.0 : trace.rows.back().cum_regret;
  row.cum_regret = prev + (opt_reward - played_reward);
  row.epoch = epoch;
  trace.rows.push_back(std::move(row));
}

StochasticEnv make_standard_fixture(std::uint64_t seed) {
  constexpr int kItems = 6;
  constexpr int kContexts = 8;
  constexpr int kMembers = 20;
  constexpr double kBeta = 0.05;

  Rng rng = Rng::seeded(seed);
  StochasticEnv env;
  env.capacity = 2;
  env.instance.kind = ClassKind::finite;
  env.instance.universe.n_items = kItems;
  env.instance.universe.n_contexts = kContexts;
  env.instance.finite.beta = kBeta;
  env.instance.finite.truth_index = 0;

  Mat truth(kContexts, kItems);
  for (int c = 0; c < kContexts; ++c)
    for (int i = 0; i < kItems; ++i) truth(c, i) = rng.uniform(kBeta, 1.0);
  env.instance.finite.members.push_back(truth);

  // Members 1..19 perturb the truth at geometrically shrinking scales, so the
  // hardest-to-reject alternative at any sample size sits near the resolution
  // limit and the fitted error decays smoothly.
  double scale = 0.25;
  for (int m = 1; m < kMembers; ++m) {
    Mat table = truth;
    for (int c = 0; c < kContexts; ++c)
      for (int i = 0; i < kItems; ++i) {
        const double lo = std::max(kBeta, truth(c, i) - scale);
        const double hi = std::min(1.0, truth(c, i) + scale);
        table(c, i) = rng.uniform(lo, hi);
      }
    env.instance.finite.members.push_back(table);
    scale *= 0.75;
  }

  for (int c = 0; c < kContexts; ++c) {
    EnvAtom atom;
    atom.context_id = c;
    atom.rewards = Vec(kItems);
    for (int i = 0; i < kItems; ++i) atom.rewards(i) = rng.uniform(0.0, 1.0);
    atom.prob = 1.0 / kContexts;
    env.atoms.push_back(std::move(atom));
  }
  validate_env(env);
  return env;
}

}  // namespace mnl

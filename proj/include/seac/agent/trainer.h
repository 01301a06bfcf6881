#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "seac/agent/replay_buffer.h"
#include "seac/agent/sac_agent.h"
#include "seac/env/point_mass_env.h"

namespace seac {

/// Derives an independent sub-seed for the named stream from the root seed.
std::uint64_t derive_seed(std::uint64_t root, const std::string& stream);

struct EpisodeRecord {
  std::int64_t episode = 0;
  std::int64_t env_steps = 0;  // total environment steps when the episode ended
  std::uint64_t env_seed = 0;
  double ret = 0.0;            // sum of step reward totals
  int steps = 0;
  double energy = 0.0;         // sum of per-step energy terms
  double sim_time = 0.0;       // sum of step durations, s
  Termination outcome = Termination::Running;
  double wall_clock = 0.0;     // s spent on the episode
};

struct StepTraceRow {
  int step = 0;
  double duration = 0.0;
  double frequency = 0.0;
  Vec2 position;
  Vec2 force;
  double reward = 0.0;
};

/// Runs one episode with `policy` from the placement given by `env_seed`.
/// Stochastic episodes draw their noise from `rng`. Appends per-step rows to
/// `trace` when given.
template <typename T>
EpisodeRecord run_episode(const Policy<T>& policy, const EnvConfig& env, const RewardWeights& weights,
                          std::uint64_t env_seed, bool stochastic, std::mt19937_64& rng,
                          std::vector<StepTraceRow>* trace = nullptr);

/// Evaluation placements shared by every algorithm trained from the same root seed.
std::vector<std::uint64_t> eval_seeds(std::uint64_t root, int episodes);

/// Per-step observation hook, used for range auditing.
using StepHook = std::function<void(const ElasticAction& action, const StepOutcome& outcome)>;

/// Off-policy training loop: uniform warmup actions, then the stochastic policy,
/// with `updates_per_env_step` gradient updates after each step past warmup.
class Trainer {
 public:
  Trainer(const SacConfig& sac, const EnvConfig& env, const RewardWeights& weights, std::uint64_t seed);

  /// Advances until `total_steps` environment steps have been taken.
  void run(std::int64_t total_steps, const std::function<void(const EpisodeRecord&)>& on_episode,
           const StepHook& on_step = {});
  /// Takes exactly one environment step (plus the scheduled updates).
  void step(const std::function<void(const EpisodeRecord&)>& on_episode, const StepHook& on_step = {});

  std::int64_t env_steps() const { return env_steps_; }
  std::int64_t episodes_done() const { return episode_index_; }
  std::int64_t updates() const { return agent_.update_count(); }
  const SacAgent<float>& agent() const { return agent_; }
  SacAgent<float>& agent() { return agent_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const EnvConfig& env_config() const { return env_.config(); }

  /// Writes/reads everything needed to continue bit-identically.
  void save_state(const std::filesystem::path& dir) const;
  void load_state(const std::filesystem::path& dir);

 private:
  void begin_episode();

  SacConfig sac_;
  PointMassEnv env_;
  SacAgent<float> agent_;
  ReplayBuffer buffer_;
  std::mt19937_64 placement_rng_;
  std::mt19937_64 warmup_rng_;
  std::mt19937_64 policy_rng_;
  std::mt19937_64 sample_rng_;
  std::mt19937_64 update_rng_;

  std::int64_t env_steps_ = 0;
  std::int64_t episode_index_ = 0;
  bool in_episode_ = false;
  Observation obs_{};
  EpisodeRecord current_;
  double episode_start_wall_ = 0.0;
};

}  // namespace seac

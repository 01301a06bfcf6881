#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "seac/env/env_config.h"
#include "seac/env/kinematics.h"
#include "seac/reward.h"

namespace seac {

inline constexpr int kObservationDim = 11;

/// [agent_x, agent_y, obs_x, obs_y, goal_x, goal_y, vel_x, vel_y, last_T, last_Fx, last_Fy]
using Observation = std::array<double, kObservationDim>;

struct StepOutcome {
  Observation observation{};
  RewardBreakdown reward;
  bool terminal = false;
  Termination reason = Termination::Running;
  double distance_to_goal = 0.0;
};

/// Samples agent, goal and obstacle positions at least `min_spacing` apart.
std::pair<EnvState, Observation> reset(std::uint64_t seed, const EnvConfig& config);

Observation observe(const EnvState& state, const EnvConfig& config);

/// Throws std::invalid_argument if the action violates the duration or force bounds.
void check_action(const ElasticAction& action, const EnvConfig& config);

/// Executes one elastic step in place and scores it.
StepOutcome step(EnvState& state, const ElasticAction& action, const EnvConfig& config,
                 const RewardWeights& weights);

/// Episode wrapper that refuses to step past a terminal outcome.
class PointMassEnv {
 public:
  explicit PointMassEnv(EnvConfig config = {}, RewardWeights weights = {});

  Observation reset(std::uint64_t seed);
  StepOutcome step(const ElasticAction& action);

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const RewardWeights& weights() const { return weights_; }
  bool terminal() const { return terminal_; }

  /// Replaces the episode state, e.g. when resuming a saved run.
  void restore(const EnvState& state, bool terminal) {
    state_ = state;
    terminal_ = terminal;
  }

 private:
  EnvConfig config_;
  RewardWeights weights_;
  EnvState state_;
  bool terminal_ = true;
};

}  // namespace seac

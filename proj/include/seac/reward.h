#pragma once

namespace seac {

enum class Termination { Running, GoalReached, Crashed, Timeout };

const char* to_string(Termination reason);

/// Weights and task constants of the scalarized step reward.
struct RewardWeights {
  double alpha_t = 1.0;          // task gain
  double alpha_eps = 1.0;        // energy gain
  double alpha_tau = 1.0;        // time gain
  double step_energy_eps = 1.0;  // J per executed step
  double goal_bonus = 100.0;
  double crash_penalty = -100.0;
  double distance_coeff = -1.0;  // per meter to goal

  void validate() const;
};

struct RewardBreakdown {
  double task = 0.0;
  double energy = 0.0;
  double time = 0.0;
  double total = 0.0;
};

/// Reward of one executed step. `distance_to_goal` is measured after the step.
RewardBreakdown compute_reward(Termination reason, double distance_to_goal, double duration,
                               const RewardWeights& w);

}  // namespace seac

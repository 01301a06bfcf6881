#include "seac/reward.h"

#include <stdexcept>

namespace seac {

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::Running: return "running";
    case Termination::GoalReached: return "goal";
    case Termination::Crashed: return "crash";
    case Termination::Timeout: return "timeout";
  }
  return "unknown";
}

void RewardWeights::validate() const {
  if (alpha_t < 0 || alpha_eps < 0 || alpha_tau < 0) {
    throw std::invalid_argument("reward gain factors must be non-negative");
  }
  if (step_energy_eps < 0) throw std::invalid_argument("step energy must be non-negative");
}

RewardBreakdown compute_reward(Termination reason, double distance_to_goal, double duration,
                               const RewardWeights& w) {
  RewardBreakdown r;
  switch (reason) {
    case Termination::GoalReached: r.task = w.goal_bonus; break;
    case Termination::Crashed: r.task = w.crash_penalty; break;
    default: r.task = w.distance_coeff * distance_to_goal; break;
  }
  r.energy = w.step_energy_eps;
  r.time = duration;
  r.total = w.alpha_t * r.task - w.alpha_eps * r.energy - w.alpha_tau * r.time;
  return r;
}

}  // namespace seac

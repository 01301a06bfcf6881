#include "seac/agent/sac_config.h"

#include <stdexcept>

namespace seac {

std::string to_string(Algo algo) { return algo == Algo::Seac ? "seac" : "sac_fixed"; }

Algo parse_algo(const std::string& text) {
  if (text == "seac") return Algo::Seac;
  if (text == "sac_fixed" || text == "sac-fixed") return Algo::SacFixed;
  throw std::invalid_argument("unknown algo '" + text + "' (expected seac or sac-fixed)");
}

std::string to_string(TimeActivation act) {
  return act == TimeActivation::TanhAffine ? "tanh_affine" : "relu6_affine";
}

TimeActivation parse_time_activation(const std::string& text) {
  if (text == "tanh_affine") return TimeActivation::TanhAffine;
  if (text == "relu6_affine") return TimeActivation::Relu6Affine;
  throw std::invalid_argument("unknown time_activation '" + text + "'");
}

void SacConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(polyak_tau > 0.0 && polyak_tau <= 1.0)) throw std::invalid_argument("polyak_tau must lie in (0, 1]");
  if (num_critics != 2) throw std::invalid_argument("num_critics must be 2");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
  if (!(alpha_init > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw std::invalid_argument("learning rates must be positive");
  if (start_steps < 0) throw std::invalid_argument("start_steps must be non-negative");
  if (updates_per_env_step < 0) throw std::invalid_argument("updates_per_env_step must be non-negative");
  if (replay_capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  if (hidden_sizes.empty()) throw std::invalid_argument("need at least one hidden layer");
  for (int h : hidden_sizes) {
    if (h <= 0) throw std::invalid_argument("hidden sizes must be positive");
  }
  if (!(fixed_duration > 0.0)) throw std::invalid_argument("fixed_duration must be positive");
}

}  // namespace seac

#pragma once

#include <string>
#include <vector>

namespace seac {

enum class Algo { Seac, SacFixed };
enum class TimeActivation { TanhAffine, Relu6Affine };

std::string to_string(Algo algo);
Algo parse_algo(const std::string& text);
std::string to_string(TimeActivation act);
TimeActivation parse_time_activation(const std::string& text);

struct SacConfig {
  Algo mode = Algo::Seac;
  double fixed_duration = 0.2;  // s, used when mode == SacFixed (5 Hz)
  TimeActivation time_activation = TimeActivation::TanhAffine;

  double gamma = 0.99;
  int batch_size = 256;
  double alpha_init = 0.12;
  bool auto_alpha = false;
  double target_entropy = -3.0;  // eta
  double polyak_tau = 0.005;
  double actor_lr = 2e-4;
  double critic_lr = 2e-4;
  int num_critics = 2;
  int start_steps = 2500;
  int updates_per_env_step = 1;
  std::size_t replay_capacity = 1'000'000;
  std::vector<int> hidden_sizes{256, 256};

  void validate() const;
};

}  // namespace seac

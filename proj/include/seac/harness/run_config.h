#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "seac/agent/sac_config.h"
#include "seac/env/env_config.h"
#include "seac/reward.h"

namespace seac {

struct RunConfig {
  Algo algo = Algo::Seac;
  std::uint64_t seed = 0;
  std::int64_t total_steps = 1'200'000;
  std::int64_t eval_every = 10'000;
  int eval_episodes = 100;
  std::int64_t checkpoint_every = 100'000;
  std::filesystem::path output_dir = "runs/default";
  EnvConfig env;
  SacConfig sac;
  RewardWeights reward;

  /// Copies `algo` into the agent config and checks every sub-config.
  void finalize();
};

/// Sets one `key = value` entry. Keys follow the hyperparameter names
/// (gamma, batch_size, alpha, eta, duration_min, goal_bonus, ...).
/// Throws std::invalid_argument for unknown keys or unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines; '#' starts a comment.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical text form; parse_run_config(dump_run_config(c)) reproduces c.
std::string dump_run_config(const RunConfig& config);

}  // namespace seac

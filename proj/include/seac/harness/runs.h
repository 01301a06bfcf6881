#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seac/agent/trainer.h"
#include "seac/harness/run_config.h"

namespace seac {

/// Files written by run_train under config.output_dir:
///   config.txt        canonical copy of the configuration
///   metrics.csv       one row per training episode (append-only, deterministic)
///   timing.csv        wall-clock seconds per episode (not deterministic)
///   progress.csv      periodic deterministic evaluation summaries
///   state/            resumable trainer state, refreshed every checkpoint_every steps
///   checkpoints/      policy checkpoints named by environment step
///   policy.ckpt       final policy
///   final_eval.csv    evaluation table of the final policy
struct TrainSummary {
  std::int64_t env_steps = 0;
  std::int64_t episodes = 0;
  std::int64_t updates = 0;
};

/// Trains from scratch, or continues from the trainer state directory `resume`.
/// `on_step` sees every training action and its outcome.
TrainSummary run_train(RunConfig config, const std::optional<std::filesystem::path>& resume = std::nullopt,
                       std::ostream* log = nullptr, const StepHook& on_step = {});

/// Deterministic-mode evaluation of a policy checkpoint on `episodes` placements
/// derived from config.seed. The algorithm is taken from the checkpoint.
std::vector<EpisodeRecord> run_eval(const std::filesystem::path& checkpoint, RunConfig config, int episodes);

/// Step-by-step record of the first evaluation episode for `seed`.
std::vector<StepTraceRow> export_trace(const std::filesystem::path& checkpoint, RunConfig config);

struct EvalSummary {
  double mean = 0.0;
  double std = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

EvalSummary summarize(std::vector<double> values);
void print_eval_report(std::ostream& out, const std::vector<EpisodeRecord>& episodes);

struct AlgoComparison {
  std::string algo;
  int runs = 0;
  int episodes = 0;
  double success_rate = 0.0;
  EvalSummary ret;
  EvalSummary steps;
  EvalSummary sim_time;
  /// Median over runs of each run's mean steps per episode.
  double median_run_mean_steps = 0.0;
  /// Median over runs of each run's mean sim time over successful episodes;
  /// a run without successes counts as +infinity.
  double median_run_success_sim_time = 0.0;
  /// median_run_mean_steps relative to the baseline group.
  double energy_ratio = 1.0;
};

/// Groups evaluation tables by their `algo` attribute. The baseline is the
/// sac_fixed group when present, otherwise the first group seen.
std::vector<AlgoComparison> compare(const std::vector<std::filesystem::path>& eval_tables);
void print_comparison(std::ostream& out, const std::vector<AlgoComparison>& rows);

}  // namespace seac

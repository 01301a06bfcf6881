// Command-line entry point: train, eval, trace, compare.

#include <malloc.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seac/harness/metrics_io.h"
#include "seac/harness/run_config.h"
#include "seac/harness/runs.h"
#include "seac/nn/checkpoint.h"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string algo;
  std::optional<std::int64_t> steps;
  std::string out;
  std::string checkpoint;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Key-value configuration file");
  cmd->add_option("--seed", f.seed, "Root random seed");
  cmd->add_option("--algo", f.algo, "seac or sac-fixed")->check(CLI::IsMember({"seac", "sac-fixed", "sac_fixed"}));
  cmd->add_option("--steps", f.steps, "Total environment steps");
  cmd->add_option("--out", f.out, "Output directory (train) or file (eval, trace)");
}

seac::RunConfig resolve(const CommonFlags& f) {
  seac::RunConfig c = f.config.empty() ? seac::RunConfig{} : seac::load_run_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (!f.algo.empty()) c.algo = seac::parse_algo(f.algo);
  if (f.steps) c.total_steps = *f.steps;
  if (!f.out.empty()) c.output_dir = f.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  // Network temporaries are a few hundred KiB; keep them off mmap.
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);

  CLI::App app{"Soft elastic actor-critic on the point-mass navigation task"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, trace_f;
  int episodes = 100;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "Train a policy");
  add_common(train, train_f);
  train->add_option("--checkpoint", train_f.checkpoint, "Trainer state directory to resume from");
  train->add_flag("--quiet", quiet, "Suppress progress lines");

  auto* eval = app.add_subcommand("eval", "Evaluate a policy checkpoint deterministically");
  add_common(eval, eval_f);
  eval->add_option("--checkpoint", eval_f.checkpoint, "Policy checkpoint")->required();
  eval->add_option("--episodes", episodes, "Number of evaluation episodes");

  auto* trace = app.add_subcommand("trace", "Export a per-step trace of one evaluation episode");
  add_common(trace, trace_f);
  trace->add_option("--checkpoint", trace_f.checkpoint, "Policy checkpoint")->required();

  std::vector<std::string> tables;
  std::string compare_out;
  auto* cmp = app.add_subcommand("compare", "Summarize evaluation tables per algorithm");
  cmp->add_option("tables", tables, "Evaluation tables")->required();
  cmp->add_option("--out", compare_out, "Also write the summary to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      seac::RunConfig c = resolve(train_f);
      std::optional<std::filesystem::path> resume;
      if (!train_f.checkpoint.empty()) resume = train_f.checkpoint;
      const auto s = seac::run_train(c, resume, quiet ? nullptr : &std::cerr);
      std::cout << "trained " << s.env_steps << " steps, " << s.episodes << " episodes, " << s.updates
                << " updates -> " << c.output_dir.string() << "\n";
    } else if (*eval) {
      seac::RunConfig c = resolve(eval_f);
      const auto episodes_run = seac::run_eval(eval_f.checkpoint, c, episodes);
      if (!eval_f.out.empty()) {
        const auto ckpt_algo = seac::nn::load_checkpoint(eval_f.checkpoint).tag("algo");
        seac::write_eval_table(eval_f.out, {{"algo", ckpt_algo}, {"seed", std::to_string(c.seed)}}, episodes_run);
      }
      seac::print_eval_report(std::cout, episodes_run);
    } else if (*trace) {
      seac::RunConfig c = resolve(trace_f);
      const auto rows = seac::export_trace(trace_f.checkpoint, c);
      const auto ckpt_algo = seac::nn::load_checkpoint(trace_f.checkpoint).tag("algo");
      const std::map<std::string, std::string> attrs{{"algo", ckpt_algo}, {"seed", std::to_string(c.seed)}};
      if (trace_f.out.empty()) {
        std::cout << seac::format_header(seac::kTraceSchema, attrs, seac::kTraceColumns);
        for (const auto& r : rows) std::cout << seac::format_trace_row(r);
      } else {
        seac::write_trace(trace_f.out, attrs, rows);
      }
    } else if (*cmp) {
      std::vector<std::filesystem::path> paths(tables.begin(), tables.end());
      const auto rows = seac::compare(paths);
      seac::print_comparison(std::cout, rows);
      if (!compare_out.empty()) {
        std::ofstream out(compare_out);
        if (!out) throw std::runtime_error("cannot write " + compare_out);
        seac::print_comparison(out, rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "seac: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "seac/harness/runs.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "seac/harness/metrics_io.h"
#include "seac/nn/checkpoint.h"

namespace seac {
namespace {

std::map<std::string, std::string> run_attributes(const RunConfig& c) {
  return {{"algo", to_string(c.algo)}, {"seed", std::to_string(c.seed)}};
}

std::ofstream open_append(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Rewrites `path` keeping the two header lines and the first `keep` data rows.
void truncate_rows(const std::filesystem::path& path, std::int64_t keep) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string() + " to resume");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  in.close();
  const auto total = static_cast<std::int64_t>(lines.size());
  std::ofstream out(path, std::ios::trunc);
  for (std::int64_t i = 0; i < std::min<std::int64_t>(total, keep + 2); ++i) out << lines[static_cast<std::size_t>(i)] << '\n';
}

std::vector<EpisodeRecord> evaluate_policy_on(const Policy<float>& policy, const RunConfig& c,
                                              const std::vector<std::uint64_t>& seeds) {
  std::vector<EpisodeRecord> out;
  std::mt19937_64 unused(0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EpisodeRecord r = run_episode(policy, c.env, c.reward, seeds[i], false, unused);
    r.episode = static_cast<std::int64_t>(i);
    out.push_back(r);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Policy<float> policy_from_checkpoint(const std::filesystem::path& checkpoint, RunConfig& config) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(checkpoint);
  config.algo = parse_algo(ckpt.tag("algo"));
  config.finalize();
  return load_policy(ckpt, config.sac, config.env);
}

}  // namespace

TrainSummary run_train(RunConfig config, const std::optional<std::filesystem::path>& resume, std::ostream* log,
                       const StepHook& on_step) {
  config.finalize();
  namespace fs = std::filesystem;
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  fs::create_directories(dir / "checkpoints");
  {
    std::ofstream cfg(dir / "config.txt", std::ios::trunc);
    if (!cfg) throw std::runtime_error("output directory is not writable: " + dir.string());
    cfg << dump_run_config(config);
  }

  Trainer trainer(config.sac, config.env, config.reward, config.seed);
  const auto attrs = run_attributes(config);
  std::int64_t evals_done = 0;
  if (resume) {
    trainer.load_state(*resume);
    truncate_rows(dir / "metrics.csv", trainer.episodes_done());
    truncate_rows(dir / "timing.csv", trainer.episodes_done());
    evals_done = config.eval_every > 0 ? trainer.env_steps() / config.eval_every : 0;
    truncate_rows(dir / "progress.csv", evals_done);
  } else {
    std::ofstream(dir / "metrics.csv", std::ios::trunc) << format_header(kMetricsSchema, attrs, kMetricsColumns);
    std::ofstream(dir / "timing.csv", std::ios::trunc) << format_header(kTimingSchema, attrs, kTimingColumns);
    std::ofstream(dir / "progress.csv", std::ios::trunc) << format_header(kProgressSchema, attrs, kProgressColumns);
  }

  auto metrics = open_append(dir / "metrics.csv");
  auto timing = open_append(dir / "timing.csv");
  auto progress = open_append(dir / "progress.csv");
  const auto seeds = eval_seeds(config.seed, config.eval_episodes);

  auto on_episode = [&](const EpisodeRecord& r) {
    metrics << format_metrics_row(r);
    timing << fmt::format("{},{}\n", r.episode, r.wall_clock);
  };

  while (trainer.env_steps() < config.total_steps) {
    trainer.step(on_episode, on_step);
    const std::int64_t s = trainer.env_steps();
    if (config.eval_every > 0 && s % config.eval_every == 0) {
      const auto eval = evaluate_policy_on(trainer.agent().policy(), config, seeds);
      int goals = 0;
      std::vector<double> ret, steps, time;
      for (const auto& e : eval) {
        goals += e.outcome == Termination::GoalReached;
        ret.push_back(e.ret);
        steps.push_back(e.steps);
        time.push_back(e.sim_time);
      }
      const double rate = static_cast<double>(goals) / static_cast<double>(eval.size());
      progress << fmt::format("{},{},{},{},{},{}\n", s, trainer.episodes_done(), rate, mean_of(ret),
                              mean_of(steps), mean_of(time));
      progress.flush();
      metrics.flush();
      ++evals_done;
      if (log) {
        *log << fmt::format("[{}] step {} episodes {} eval success {:.2f} return {:.1f} steps {:.1f} sim_time {:.2f}\n",
                            to_string(config.algo), s, trainer.episodes_done(), rate, mean_of(ret),
                            mean_of(steps), mean_of(time))
             << std::flush;
      }
    }
    if (config.checkpoint_every > 0 && s % config.checkpoint_every == 0) {
      metrics.flush();
      timing.flush();
      trainer.save_state(dir / "state");
      nn::save_checkpoint(dir / "checkpoints" / fmt::format("policy_{:09d}.ckpt", s),
                          trainer.agent().policy_checkpoint(config.env));
    }
  }
  metrics.flush();
  timing.flush();
  trainer.save_state(dir / "state");
  nn::save_checkpoint(dir / "policy.ckpt", trainer.agent().policy_checkpoint(config.env));
  write_eval_table(dir / "final_eval.csv", attrs, evaluate_policy_on(trainer.agent().policy(), config, seeds));
  return {trainer.env_steps(), trainer.episodes_done(), trainer.updates()};
}

std::vector<EpisodeRecord> run_eval(const std::filesystem::path& checkpoint, RunConfig config, int episodes) {
  const Policy<float> policy = policy_from_checkpoint(checkpoint, config);
  return evaluate_policy_on(policy, config, eval_seeds(config.seed, episodes));
}

std::vector<StepTraceRow> export_trace(const std::filesystem::path& checkpoint, RunConfig config) {
  const Policy<float> policy = policy_from_checkpoint(checkpoint, config);
  std::vector<StepTraceRow> rows;
  std::mt19937_64 unused(0);
  run_episode(policy, config.env, config.reward, eval_seeds(config.seed, 1).front(), false, unused, &rows);
  return rows;
}

EvalSummary summarize(std::vector<double> v) {
  EvalSummary s;
  if (v.empty()) return s;
  s.mean = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(v.size()));
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  return s;
}

void print_eval_report(std::ostream& out, const std::vector<EpisodeRecord>& episodes) {
  std::vector<double> ret, steps, time;
  int goals = 0, crashes = 0, timeouts = 0;
  for (const auto& e : episodes) {
    ret.push_back(e.ret);
    steps.push_back(e.steps);
    time.push_back(e.sim_time);
    goals += e.outcome == Termination::GoalReached;
    crashes += e.outcome == Termination::Crashed;
    timeouts += e.outcome == Termination::Timeout;
  }
  out << fmt::format("episodes {}  goal {}  crash {}  timeout {}  success rate {:.3f}\n", episodes.size(), goals,
                     crashes, timeouts, episodes.empty() ? 0.0 : static_cast<double>(goals) / episodes.size());
  out << fmt::format("{:<10} {:>12} {:>12} {:>12} {:>12} {:>12}\n", "metric", "mean", "std", "q25", "median", "q75");
  auto row = [&](const char* name, const std::vector<double>& v) {
    const EvalSummary s = summarize(v);
    out << fmt::format("{:<10} {:>12.4f} {:>12.4f} {:>12.4f} {:>12.4f} {:>12.4f}\n", name, s.mean, s.std, s.q25,
                       s.median, s.q75);
  };
  row("return", ret);
  row("steps", steps);
  row("sim_time", time);
}

std::vector<AlgoComparison> compare(const std::vector<std::filesystem::path>& eval_tables) {
  if (eval_tables.empty()) throw std::invalid_argument("compare needs at least one evaluation table");
  std::vector<std::string> order;
  std::map<std::string, std::vector<EvalTable>> groups;
  for (const auto& path : eval_tables) {
    EvalTable t = read_eval_table(path);
    const auto it = t.header.attributes.find("algo");
    if (it == t.header.attributes.end()) throw std::runtime_error(path.string() + ": header lacks algo=");
    if (!groups.count(it->second)) order.push_back(it->second);
    groups[it->second].push_back(std::move(t));
  }

  std::vector<AlgoComparison> rows;
  for (const auto& algo : order) {
    AlgoComparison c;
    c.algo = algo;
    std::vector<double> ret, steps, time, run_steps, run_success_time;
    int goals = 0;
    for (const auto& t : groups[algo]) {
      std::vector<double> rs, st;
      for (const auto& e : t.episodes) {
        ret.push_back(e.ret);
        steps.push_back(e.steps);
        time.push_back(e.sim_time);
        rs.push_back(e.steps);
        if (e.outcome == Termination::GoalReached) {
          ++goals;
          st.push_back(e.sim_time);
        }
      }
      run_steps.push_back(mean_of(rs));
      run_success_time.push_back(st.empty() ? std::numeric_limits<double>::infinity() : mean_of(st));
    }
    c.runs = static_cast<int>(groups[algo].size());
    c.episodes = static_cast<int>(ret.size());
    c.success_rate = c.episodes ? static_cast<double>(goals) / c.episodes : 0.0;
    c.ret = summarize(ret);
    c.steps = summarize(steps);
    c.sim_time = summarize(time);
    c.median_run_mean_steps = median_of(run_steps);
    c.median_run_success_sim_time = median_of(run_success_time);
    rows.push_back(c);
  }
  const auto base = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.algo == "sac_fixed"; });
  const double baseline = (base != rows.end() ? *base : rows.front()).median_run_mean_steps;
  for (auto& r : rows) r.energy_ratio = r.median_run_mean_steps / baseline;
  return rows;
}

void print_comparison(std::ostream& out, const std::vector<AlgoComparison>& rows) {
  out << "# seac-compare v1\n"
      << "algo,runs,episodes,success_rate,mean_return,std_return,mean_steps,std_steps,mean_sim_time,"
         "std_sim_time,median_run_mean_steps,median_run_success_sim_time,energy_ratio\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.algo, r.runs, r.episodes, r.success_rate,
                       r.ret.mean, r.ret.std, r.steps.mean, r.steps.std, r.sim_time.mean, r.sim_time.std,
                       r.median_run_mean_steps, r.median_run_success_sim_time, r.energy_ratio);
  }
}

}  // namespace seac

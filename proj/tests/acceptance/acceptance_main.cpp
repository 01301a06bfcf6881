// Acceptance suite: one PASS/FAIL line per criterion.
//
//   seac_acceptance [--work-dir DIR] [--only N]...
//
// Criteria 5, 7 and 9 share two 50k-step training runs per algorithm.
// Criterion 8 trains 3 seeds x 2 algorithms for 300k steps each; finished runs
// under the work directory are reused when their configuration matches.

#include <malloc.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "seac/agent/sac_agent.h"
#include "seac/agent/trainer.h"
#include "seac/env/kinematics.h"
#include "seac/env/point_mass_env.h"
#include "seac/harness/metrics_io.h"
#include "seac/harness/runs.h"
#include "seac/nn/checkpoint.h"
#include "seac/nn/grad_check.h"
#include "seac/nn/squashed_gaussian.h"
#include "seac/reward.h"
#include "support/kinematics_oracle.h"

namespace fs = std::filesystem;
using namespace seac;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Physics against the scalar oracle.
Verdict physics_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> pos(0.0, 2.0), vel(-2.0, 2.0), force(-100.0, 100.0), dur(0.01, 1.0);
  const EnvConfig cfg;
  double worst_pos = 0, worst_vel = 0, worst_force = 0;
  for (int i = 0; i < 10000; ++i) {
    EnvState s;
    s.agent_pos = {pos(rng), pos(rng)};
    s.agent_vel = i % 4 == 0 ? Vec2{} : Vec2{vel(rng), vel(rng)};
    const ElasticAction a{dur(rng), {force(rng), force(rng)}};
    const Vec2 f = apply_friction(a.force, s.agent_vel, cfg);
    double ofx, ofy;
    oracle::friction(a.force.x, a.force.y, s.agent_vel.x, s.agent_vel.y, 0.6, 20.0, 9.80665, ofx, ofy);
    worst_force = std::max({worst_force, std::abs(f.x - ofx), std::abs(f.y - ofy)});
    const auto r = integrate(s, a, cfg);
    const auto o = oracle::integrate(s.agent_pos.x, s.agent_pos.y, s.agent_vel.x, s.agent_vel.y, a.duration,
                                     a.force.x, a.force.y);
    worst_pos = std::max({worst_pos, std::abs(r.pos.x - o.px), std::abs(r.pos.y - o.py)});
    worst_vel = std::max({worst_vel, std::abs(r.vel.x - o.vx), std::abs(r.vel.y - o.vy)});
  }
  const double t = seconds_since(t0);
  return {worst_pos <= 1e-9 && worst_force <= 1e-9 && worst_vel <= 1e-9 && t < 1.0,
          fmt::format("10000 pairs, max |dpos| {:.3g} m, |dforce| {:.3g} N, |dvel| {:.3g} m/s, {:.3f} s", worst_pos,
                      worst_force, worst_vel, t)};
}

// 2. Reward arithmetic and energy identity.
Verdict reward_arithmetic() {
  const RewardWeights w;
  const double goal = compute_reward(Termination::GoalReached, 0.01, 0.2, w).total;
  const double crash = compute_reward(Termination::Crashed, 0.7, 0.5, w).total;
  const double run = compute_reward(Termination::Running, 1.0, 0.01, w).total;
  const bool cases = goal == 98.8 && crash == -101.5 && run == -2.01;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 3.0), t(0.01, 1.0), f(-100.0, 100.0);
  bool monotone = true;
  for (int i = 0; i < 10000; ++i) {
    const double a = d(rng), b = d(rng), tau = t(rng);
    monotone &= compute_reward(Termination::Running, std::min(a, b), tau, w).total >=
                compute_reward(Termination::Running, std::max(a, b), tau, w).total;
    monotone &= compute_reward(Termination::Running, a, std::min(tau, b / 3), w).total >=
                compute_reward(Termination::Running, a, std::max(tau, b / 3), w).total;
  }
  int energy_mismatch = 0;
  for (std::uint64_t ep = 0; ep < 1000; ++ep) {
    PointMassEnv env;
    env.reset(ep);
    double energy = 0;
    int steps = 0;
    while (!env.terminal()) {
      energy += env.step({t(rng), {f(rng), f(rng)}}).reward.energy;
      ++steps;
    }
    energy_mismatch += energy != steps;
  }
  return {cases && monotone && energy_mismatch == 0,
          fmt::format("cases {} / {} / {}, monotone {}, energy mismatches {} of 1000 episodes", goal, crash, run,
                      monotone ? "yes" : "no", energy_mismatch)};
}

// 3. Analytic gradients against central differences.
Verdict gradient_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr double h = 1e-5;
  SacConfig sac;
  sac.hidden_sizes = {8, 8};
  const EnvConfig env;
  std::vector<std::string> notes;
  double worst = 0;
  auto record = [&](const std::string& name, double err) {
    worst = std::max(worst, err);
    notes.push_back(fmt::format("{} {:.2g}", name, err));
  };
  auto gaussian = [](int r, int c, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> n;
    nn::Matrix<double> m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = n(g);
    return m;
  };

  for (auto act : {TimeActivation::TanhAffine, TimeActivation::Relu6Affine}) {
    sac.time_activation = act;
    SacAgent<double> agent(sac, env, 3);
    const auto obs = gaussian(11, 5, 4);
    const auto noise = gaussian(3, 5, 5);

    if (act == TimeActivation::TanhAffine) {  // network forward/backward
      const auto w = gaussian(1, 5, 6);
      const auto in = gaussian(14, 5, 7);
      const auto base = agent.critic(0);
      const nn::LossWithGrad loss = [&](std::span<const double> p, std::span<double> g) {
        auto q = base;
        q.assign(p);
        nn::MlpCache<double> cache;
        const auto y = nn::forward(q, in, &cache);
        auto grads = q.zeros_like();
        nn::backward(q, cache, w, &grads);
        const auto gf = grads.flatten();
        std::copy(gf.begin(), gf.end(), g.begin());
        return (w.array() * y.array()).sum();
      };
      record("network", nn::grad_check(loss, base.flatten(), h));
    }
    if (act == TimeActivation::TanhAffine) {  // critic loss
      Batch<double> b;
      b.state = obs;
      b.action.resize(3, 5);
      b.action << 0.1, 0.5, 0.9, 0.3, 0.7, -80, -20, 10, 60, 90, 40, -40, 0, 75, -95;
      const auto in = critic_input<double>(b.state, canonical_actions<double>(b.action, agent.dims()));
      const nn::Vector<double> y = gaussian(5, 1, 8).col(0);
      const auto base = agent.critic(1);
      const nn::LossWithGrad loss = [&](std::span<const double> p, std::span<double> g) {
        auto q = base;
        q.assign(p);
        auto grads = q.zeros_like();
        const double l = critic_loss<double>(q, in, y, &grads);
        const auto gf = grads.flatten();
        std::copy(gf.begin(), gf.end(), g.begin());
        return l;
      };
      record("critic", nn::grad_check(loss, base.flatten(), h));
    }
    {  // actor loss
      const auto base = agent.policy().actor();
      const nn::LossWithGrad loss = [&](std::span<const double> p, std::span<double> g) {
        auto a = base;
        a.assign(p);
        auto grads = a.zeros_like();
        const auto l = actor_loss<double>(a, agent.dims(), agent.critic(0), agent.critic(1), obs, noise, 0.12, &grads);
        const auto gf = grads.flatten();
        std::copy(gf.begin(), gf.end(), g.begin());
        return l.loss;
      };
      record(fmt::format("actor/{}", to_string(act)), nn::grad_check(loss, base.flatten(), h));
    }
  }
  {  // temperature loss
    nn::Vector<double> logp(4);
    logp << -1.5, 0.3, -4.2, 2.0;
    const nn::LossWithGrad loss = [&](std::span<const double> p, std::span<double> g) {
      double grad = 0;
      const double l = temperature_loss<double>(p[0], logp, -3.0, &grad);
      g[0] = grad;
      return l;
    };
    const std::vector<double> at{std::log(0.12)};
    record("temperature", nn::grad_check(loss, at, h));
  }
  const double t = seconds_since(t0);
  std::string joined;
  for (const auto& n : notes) joined += (joined.empty() ? "" : ", ") + n;
  return {worst <= 1e-4 && t < 60.0, fmt::format("max rel err {:.3g} ({}), {:.2f} s", worst, joined, t)};
}

// 4. Transformed densities integrate to one.
Verdict density_normalization() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mean(-2.0, 2.0), log_std(-2.0, 1.0);
  const std::vector<nn::ActionDim> dims{{nn::SquashKind::TanhAffine, 0.01, 1.0},
                                        {nn::SquashKind::TanhAffine, -100.0, 100.0},
                                        {nn::SquashKind::Relu6Affine, 0.01, 1.0}};
  double worst = 0;
  for (int pair = 0; pair < 20; ++pair) {
    const double m = mean(rng), ls = log_std(rng), sigma = std::exp(ls);
    for (const auto& dim : dims) {
      const double mu = dim.kind == nn::SquashKind::Relu6Affine ? m + 3.0 : m;
      const double half = 0.5 * (dim.high - dim.low);
      // Substitute the pre-squash variable: the integral over the action
      // interval becomes one over u with the Jacobian da/du.
      const int n = 200000;
      const double lo = mu - 12 * sigma, hi = mu + 12 * sigma, du = (hi - lo) / n;
      double mass = 0;
      for (int i = 0; i <= n; ++i) {
        const double u = lo + i * du;
        const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double jac;
        if (dim.kind == nn::SquashKind::TanhAffine) {
          const double tt = std::tanh(u);
          jac = half * (1 - tt * tt);
        } else {
          if (u <= 0 || u >= 6) continue;
          jac = half / 3.0;
        }
        const auto s = nn::sample_dim<double>(dim, mu, ls, (u - mu) / sigma);
        mass += wgt * std::exp(s.log_prob_physical) * jac;
      }
      mass *= du / 3.0;
      if (dim.kind == nn::SquashKind::Relu6Affine) {
        mass += std::exp(nn::sample_dim<double>(dim, mu, ls, (-1.0 - mu) / sigma).log_prob_physical);
        mass += std::exp(nn::sample_dim<double>(dim, mu, ls, (7.0 - mu) / sigma).log_prob_physical);
      }
      worst = std::max(worst, std::abs(mass - 1.0));
    }
  }
  return {worst <= 1e-2, fmt::format("20 (mean, log_std) pairs x 3 transforms, max |mass - 1| {:.3g}", worst)};
}

// 6. Parameter-count delta between the elastic and fixed-rate actors.
Verdict architecture_delta() {
  SacConfig elastic, fixed;
  fixed.mode = Algo::SacFixed;
  SacAgent<float> a(elastic, EnvConfig{}, 1), b(fixed, EnvConfig{}, 1);
  const auto pa = a.policy().actor().parameter_count();
  const auto pb = b.policy().actor().parameter_count();
  std::ostringstream ca, cb;
  nn::write_checkpoint(ca, a.policy_checkpoint(EnvConfig{}));
  nn::write_checkpoint(cb, b.policy_checkpoint(EnvConfig{}));
  const long delta = static_cast<long>(pa) - static_cast<long>(pb);
  const long bytes = static_cast<long>(ca.str().size()) - static_cast<long>(cb.str().size());
  return {delta == 2 * (256 + 1),
          fmt::format("actor params {} vs {}, delta {} (expected 514), checkpoint file delta {} bytes", pa, pb, delta,
                      bytes)};
}

// Runs shared by criteria 5, 7 and 9.
struct SharedRuns {
  fs::path root;
  std::int64_t steps = 50000;
  std::map<std::string, std::int64_t> violations;
  std::map<std::string, std::int64_t> audited;
  std::map<std::string, std::pair<double, double>> duration_span;
  bool done = false;

  RunConfig config(Algo algo, const std::string& copy) const {
    RunConfig c;
    c.algo = algo;
    c.seed = 17;
    c.total_steps = steps;
    c.eval_every = 10000;
    c.eval_episodes = 100;
    c.checkpoint_every = 25000;
    c.output_dir = root / fmt::format("{}_{}", to_string(algo), copy);
    return c;
  }

  void ensure(std::ostream& log) {
    if (done) return;
    for (Algo algo : {Algo::Seac, Algo::SacFixed}) {
      const std::string name = to_string(algo);
      duration_span[name] = {1e9, -1e9};
      for (const char* copy : {"a", "b"}) {
        RunConfig c = config(algo, copy);
        fs::remove_all(c.output_dir);
        log << fmt::format("  training {} copy {} for {} steps\n", name, copy, steps) << std::flush;
        StepHook audit;
        if (std::string(copy) == "a") {
          audit = [&, name](const ElasticAction& a, const StepOutcome&) {
            ++audited[name];
            auto& span = duration_span[name];
            span.first = std::min(span.first, a.duration);
            span.second = std::max(span.second, a.duration);
            const bool ok = a.duration >= 0.01 && a.duration <= 1.0 && std::abs(a.force.x) <= 100.0 &&
                            std::abs(a.force.y) <= 100.0;
            violations[name] += !ok;
          };
        }
        run_train(c, std::nullopt, nullptr, audit);
        write_trace(c.output_dir / "trace.csv", {{"algo", name}}, export_trace(c.output_dir / "policy.ckpt", c));
      }
    }
    done = true;
  }
};

// 5. Range safety during training and in the exported traces.
Verdict range_safety(SharedRuns& runs) {
  runs.ensure(std::cerr);
  std::int64_t bad = 0, total = 0;
  std::string detail;
  for (Algo algo : {Algo::Seac, Algo::SacFixed}) {
    const std::string name = to_string(algo);
    bad += runs.violations[name];
    total += runs.audited[name];
    int trace_bad = 0;
    const auto rows = read_trace(runs.config(algo, "a").output_dir / "trace.csv");
    for (const auto& r : rows) {
      trace_bad += !(r.frequency >= 1.0 - 1e-12 && r.frequency <= 100.0 + 1e-9 && std::abs(r.force.x) <= 100.0 &&
                     std::abs(r.force.y) <= 100.0);
    }
    bad += trace_bad;
    detail += fmt::format("{}: {} steps, {} violations, duration span [{:.4g}, {:.4g}] s, trace rows {} bad {}; ",
                          name, runs.audited[name], runs.violations[name], runs.duration_span[name].first,
                          runs.duration_span[name].second, rows.size(), trace_bad);
  }
  return {bad == 0 && total == 2 * runs.steps, detail};
}

// 7. Byte-identical artifacts from identical runs.
Verdict determinism(SharedRuns& runs) {
  runs.ensure(std::cerr);
  bool ok = true;
  std::string detail;
  for (Algo algo : {Algo::Seac, Algo::SacFixed}) {
    const fs::path a = runs.config(algo, "a").output_dir, b = runs.config(algo, "b").output_dir;
    std::vector<std::string> differing;
    for (const char* f : {"metrics.csv", "progress.csv", "final_eval.csv", "trace.csv", "policy.ckpt"}) {
      const std::string x = slurp(a / f), y = slurp(b / f);
      if (x.empty() || x != y) differing.push_back(f);
    }
    ok &= differing.empty();
    std::string diff_list;
    for (const auto& d : differing) diff_list += " " + d;
    detail += fmt::format("{}: {} episodes, {}; ", to_string(algo), read_metrics(a / "metrics.csv").size(),
                          differing.empty() ? "all files identical" : "differ:" + diff_list);
  }
  return {ok, detail};
}

// 9. Checkpoint save/load/save and evaluation equivalence.
Verdict checkpoint_roundtrip(SharedRuns& runs) {
  runs.ensure(std::cerr);
  bool ok = true;
  std::string detail;
  for (Algo algo : {Algo::Seac, Algo::SacFixed}) {
    const RunConfig c = runs.config(algo, "a");
    const fs::path original = c.output_dir / "policy.ckpt", again = c.output_dir / "policy_resaved.ckpt";
    nn::save_checkpoint(again, nn::load_checkpoint(original));
    const bool bytes_equal = slurp(original) == slurp(again);

    const fs::path full = c.output_dir / "state" / "agent.ckpt", full_again = c.output_dir / "agent_resaved.ckpt";
    SacAgent<float> agent(c.sac, c.env, 0);
    RunConfig fc = c;
    fc.finalize();
    SacAgent<float> restored(fc.sac, fc.env, 999);
    restored.restore(nn::load_checkpoint(full));
    nn::save_checkpoint(full_again, restored.full_checkpoint(fc.env));
    const bool full_equal = slurp(full) == slurp(full_again);

    const auto e1 = run_eval(original, c, 100);
    const auto e2 = run_eval(again, c, 100);
    write_eval_table(c.output_dir / "eval_original.csv", {{"algo", to_string(algo)}}, e1);
    write_eval_table(c.output_dir / "eval_resaved.csv", {{"algo", to_string(algo)}}, e2);
    const bool evals_equal =
        slurp(c.output_dir / "eval_original.csv") == slurp(c.output_dir / "eval_resaved.csv");
    ok &= bytes_equal && full_equal && evals_equal;
    detail += fmt::format("{}: policy file {}, training-state file {}, eval tables {}; ", to_string(algo),
                          bytes_equal ? "identical" : "DIFFERENT", full_equal ? "identical" : "DIFFERENT",
                          evals_equal ? "identical" : "DIFFERENT");
  }
  return {ok, detail};
}

// 8. Desk-scale training outcome.
Verdict training_outcome(const fs::path& root) {
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<fs::path> tables;
  for (Algo algo : {Algo::Seac, Algo::SacFixed}) {
    for (auto seed : seeds) {
      RunConfig c;
      c.algo = algo;
      c.seed = seed;
      c.total_steps = 300000;
      c.eval_every = 25000;
      c.eval_episodes = 100;
      c.checkpoint_every = 25000;
      c.output_dir = root / fmt::format("{}_seed{}", to_string(algo), seed);
      RunConfig dumped = c;
      dumped.finalize();
      const std::string cfg_text = dump_run_config(dumped);
      const fs::path dir = c.output_dir;
      const bool same_cfg = slurp(dir / "config.txt") == cfg_text;
      if (same_cfg && fs::exists(dir / "final_eval.csv")) {
        std::cerr << fmt::format("  reusing finished run {}\n", dir.string());
      } else if (same_cfg && fs::exists(dir / "state" / "trainer.txt")) {
        std::cerr << fmt::format("  resuming {}\n", dir.string()) << std::flush;
        run_train(c, dir / "state", &std::cerr);
      } else {
        fs::remove_all(dir);
        std::cerr << fmt::format("  training {}\n", dir.string()) << std::flush;
        run_train(c, std::nullopt, &std::cerr);
      }
      tables.push_back(dir / "final_eval.csv");
    }
  }
  const auto rows = compare(tables);
  std::ofstream summary(root / "comparison.csv");
  print_comparison(summary, rows);

  const AlgoComparison* seac_row = nullptr;
  const AlgoComparison* sac_row = nullptr;
  for (const auto& r : rows) (r.algo == "seac" ? seac_row : sac_row) = &r;
  if (!seac_row || !sac_row) return {false, "missing evaluation group"};

  // (a) is judged on the median seed.
  std::vector<double> rates;
  for (auto seed : seeds) {
    const auto t = read_eval_table(root / fmt::format("seac_seed{}", seed) / "final_eval.csv");
    int goals = 0;
    for (const auto& e : t.episodes) goals += e.outcome == Termination::GoalReached;
    rates.push_back(static_cast<double>(goals) / static_cast<double>(t.episodes.size()));
  }
  std::vector<double> sorted = rates;
  std::sort(sorted.begin(), sorted.end());
  const double median_rate = sorted[sorted.size() / 2];
  const bool a = median_rate >= 0.80;
  const bool b = seac_row->median_run_mean_steps <= 0.85 * sac_row->median_run_mean_steps;
  const bool c = seac_row->median_run_success_sim_time <= sac_row->median_run_success_sim_time;
  return {a && b && c,
          fmt::format("(a) SEAC success per seed {:.2f}/{:.2f}/{:.2f}, median {:.2f} (need >= 0.80) {}; "
                      "(b) median mean steps SEAC {:.1f} vs SAC {:.1f}, ratio {:.3f} (need <= 0.85) {}; "
                      "(c) median success sim time SEAC {:.2f} s vs SAC {:.2f} s {}",
                      rates[0], rates[1], rates[2], median_rate, a ? "ok" : "miss", seac_row->median_run_mean_steps,
                      sac_row->median_run_mean_steps, seac_row->median_run_mean_steps / sac_row->median_run_mean_steps,
                      b ? "ok" : "miss", seac_row->median_run_success_sim_time, sac_row->median_run_success_sim_time,
                      c ? "ok" : "miss")};
}

}  // namespace

int main(int argc, char** argv) {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);

  CLI::App app{"SEAC acceptance suite"};
  std::string work_dir = "acceptance_work";
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "Scratch directory for training runs");
  app.add_option("--only", only, "Run only these criteria (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected(only.begin(), only.end());
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 9};

  SharedRuns shared;
  shared.root = fs::path(work_dir) / "shared";
  fs::create_directories(shared.root);

  const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria{
      {1, {"physics oracle equivalence", physics_oracle}},
      {2, {"reward arithmetic", reward_arithmetic}},
      {3, {"gradient fidelity", gradient_fidelity}},
      {4, {"squashed density normalization", density_normalization}},
      {5, {"range safety", [&] { return range_safety(shared); }}},
      {6, {"architecture delta", architecture_delta}},
      {7, {"determinism", [&] { return determinism(shared); }}},
      {8, {"desk-scale training outcome", [&] { return training_outcome(fs::path(work_dir) / "desk_scale"); }}},
      {9, {"checkpoint roundtrip", [&] { return checkpoint_roundtrip(shared); }}},
  };

  int failures = 0;
  for (int id : selected) {
    const auto& [name, fn] = criteria.at(id);
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << fmt::format("criterion {} {}: {} | {}\n", id, name, v.pass ? "PASS" : "FAIL", v.detail)
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}

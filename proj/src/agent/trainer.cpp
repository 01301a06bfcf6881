#include "seac/agent/trainer.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seac {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, const std::string& stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root) ^ h);
}

std::vector<std::uint64_t> eval_seeds(std::uint64_t root, int episodes) {
  std::mt19937_64 rng(derive_seed(root, "eval"));
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(episodes));
  for (auto& s : seeds) s = rng();
  return seeds;
}

template <typename T>
EpisodeRecord run_episode(const Policy<T>& policy, const EnvConfig& env_cfg, const RewardWeights& weights,
                          std::uint64_t env_seed, bool stochastic, std::mt19937_64& rng,
                          std::vector<StepTraceRow>* trace) {
  const double start = now_seconds();
  PointMassEnv env(env_cfg, weights);
  Observation obs = env.reset(env_seed);
  EpisodeRecord rec;
  rec.env_seed = env_seed;
  while (!env.terminal()) {
    const ElasticAction a = policy.act(obs, stochastic, rng);
    const StepOutcome out = env.step(a);
    ++rec.steps;
    rec.ret += out.reward.total;
    rec.energy += out.reward.energy;
    rec.sim_time += a.duration;
    rec.outcome = out.reason;
    if (trace) {
      trace->push_back({rec.steps, a.duration, 1.0 / a.duration, env.state().agent_pos, a.force,
                        out.reward.total});
    }
    obs = out.observation;
  }
  rec.env_steps = rec.steps;
  rec.wall_clock = now_seconds() - start;
  return rec;
}

template EpisodeRecord run_episode<float>(const Policy<float>&, const EnvConfig&, const RewardWeights&,
                                          std::uint64_t, bool, std::mt19937_64&, std::vector<StepTraceRow>*);
template EpisodeRecord run_episode<double>(const Policy<double>&, const EnvConfig&, const RewardWeights&,
                                           std::uint64_t, bool, std::mt19937_64&, std::vector<StepTraceRow>*);

Trainer::Trainer(const SacConfig& sac, const EnvConfig& env, const RewardWeights& weights, std::uint64_t seed)
    : sac_(sac),
      env_(env, weights),
      agent_(sac, env, derive_seed(seed, "init")),
      buffer_(sac.replay_capacity),
      placement_rng_(derive_seed(seed, "placement")),
      warmup_rng_(derive_seed(seed, "warmup")),
      policy_rng_(derive_seed(seed, "policy")),
      sample_rng_(derive_seed(seed, "sampling")),
      update_rng_(derive_seed(seed, "update")) {}

void Trainer::begin_episode() {
  current_ = EpisodeRecord{};
  current_.episode = episode_index_;
  current_.env_seed = placement_rng_();
  obs_ = env_.reset(current_.env_seed);
  episode_start_wall_ = now_seconds();
  in_episode_ = true;
}

void Trainer::step(const std::function<void(const EpisodeRecord&)>& on_episode, const StepHook& on_step) {
  if (!in_episode_) begin_episode();

  ElasticAction a;
  const EnvConfig& cfg = env_.config();
  if (env_steps_ < sac_.start_steps) {
    std::uniform_real_distribution<double> dur(cfg.duration_min, cfg.duration_max);
    std::uniform_real_distribution<double> force(-cfg.force_bound, cfg.force_bound);
    a.duration = dur(warmup_rng_);
    a.force.x = force(warmup_rng_);
    a.force.y = force(warmup_rng_);
    if (sac_.mode == Algo::SacFixed) a.duration = sac_.fixed_duration;
  } else {
    a = agent_.select_action(obs_, true, policy_rng_);
  }

  const StepOutcome out = env_.step(a);
  if (on_step) on_step(a, out);
  ++env_steps_;

  Transition t;
  t.state = obs_;
  t.action = {a.duration, a.force.x, a.force.y};
  t.reward = out.reward.total;
  t.next_state = out.observation;
  t.done = out.terminal;
  t.terminal = out.reason == Termination::GoalReached || out.reason == Termination::Crashed;
  buffer_.push(t);

  ++current_.steps;
  current_.ret += out.reward.total;
  current_.energy += out.reward.energy;
  current_.sim_time += a.duration;
  current_.outcome = out.reason;
  obs_ = out.observation;

  if (env_steps_ > sac_.start_steps && buffer_.size() >= static_cast<std::size_t>(sac_.batch_size)) {
    for (int k = 0; k < sac_.updates_per_env_step; ++k) {
      const Batch<float> batch = buffer_.sample<float>(static_cast<std::size_t>(sac_.batch_size), sample_rng_);
      agent_.update(batch, update_rng_);
    }
  }

  if (out.terminal) {
    if (std::abs(current_.energy - current_.steps * env_.weights().step_energy_eps) > 1e-9 * current_.steps) {
      throw std::logic_error("energy bookkeeping diverged from the step count");
    }
    current_.env_steps = env_steps_;
    current_.wall_clock = now_seconds() - episode_start_wall_;
    ++episode_index_;
    in_episode_ = false;
    if (on_episode) on_episode(current_);
  }
}

void Trainer::run(std::int64_t total_steps, const std::function<void(const EpisodeRecord&)>& on_episode,
                  const StepHook& on_step) {
  while (env_steps_ < total_steps) step(on_episode, on_step);
}

void Trainer::save_state(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nn::save_checkpoint(dir / "agent.ckpt", agent_.full_checkpoint(env_.config()));
  {
    std::ofstream out(dir / "replay.bin", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "replay.bin").string());
    buffer_.save(out);
  }
  std::ofstream out(dir / "trainer.txt", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / "trainer.txt").string());
  const EnvState& s = env_.state();
  out << "env_steps " << env_steps_ << '\n'
      << "episode_index " << episode_index_ << '\n'
      << "in_episode " << in_episode_ << '\n'
      << "env_terminal " << env_.terminal() << '\n'
      << "env_state";
  for (double v : {s.agent_pos.x, s.agent_pos.y, s.agent_vel.x, s.agent_vel.y, s.obstacle_pos.x,
                   s.obstacle_pos.y, s.goal_pos.x, s.goal_pos.y, s.last_duration, s.last_force.x,
                   s.last_force.y}) {
    out << ' ' << exact(v);
  }
  out << ' ' << s.step_count << '\n' << "obs";
  for (double v : obs_) out << ' ' << exact(v);
  out << '\n'
      << "episode " << current_.episode << ' ' << current_.env_seed << ' ' << exact(current_.ret) << ' '
      << current_.steps << ' ' << exact(current_.energy) << ' ' << exact(current_.sim_time) << ' '
      << static_cast<int>(current_.outcome) << '\n';
  out << "rng_placement " << placement_rng_ << '\n'
      << "rng_warmup " << warmup_rng_ << '\n'
      << "rng_policy " << policy_rng_ << '\n'
      << "rng_sampling " << sample_rng_ << '\n'
      << "rng_update " << update_rng_ << '\n';
}

void Trainer::load_state(const std::filesystem::path& dir) {
  agent_.restore(nn::load_checkpoint(dir / "agent.ckpt"));
  {
    std::ifstream in(dir / "replay.bin", std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + (dir / "replay.bin").string());
    buffer_.load(in);
  }
  std::ifstream in(dir / "trainer.txt");
  if (!in) throw std::runtime_error("cannot read " + (dir / "trainer.txt").string());
  auto expect = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key) throw std::runtime_error(std::string("trainer state: expected ") + key);
  };
  auto read_double = [&] {
    std::string tok;
    in >> tok;
    return std::stod(tok);
  };
  bool env_terminal = false;
  expect("env_steps");
  in >> env_steps_;
  expect("episode_index");
  in >> episode_index_;
  expect("in_episode");
  in >> in_episode_;
  expect("env_terminal");
  in >> env_terminal;
  expect("env_state");
  EnvState s;
  for (double* v : {&s.agent_pos.x, &s.agent_pos.y, &s.agent_vel.x, &s.agent_vel.y, &s.obstacle_pos.x,
                    &s.obstacle_pos.y, &s.goal_pos.x, &s.goal_pos.y, &s.last_duration, &s.last_force.x,
                    &s.last_force.y}) {
    *v = read_double();
  }
  in >> s.step_count;
  env_.restore(s, env_terminal);
  expect("obs");
  for (double& v : obs_) v = read_double();
  expect("episode");
  int outcome = 0;
  in >> current_.episode >> current_.env_seed;
  current_.ret = read_double();
  in >> current_.steps;
  current_.energy = read_double();
  current_.sim_time = read_double();
  in >> outcome;
  current_.outcome = static_cast<Termination>(outcome);
  expect("rng_placement");
  in >> placement_rng_;
  expect("rng_warmup");
  in >> warmup_rng_;
  expect("rng_policy");
  in >> policy_rng_;
  expect("rng_sampling");
  in >> sample_rng_;
  expect("rng_update");
  in >> update_rng_;
  if (!in) throw std::runtime_error("trainer state file is malformed");
  episode_start_wall_ = now_seconds();
}

}  // namespace seac

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "seac/harness/run_config.h"

namespace seac {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("'" + key + "' expects a number, got '" + v + "'");
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  // Accept integral scientific notation such as 1e6 or 1.2e6.
  const double d = to_double(key, v);
  const auto i = static_cast<std::int64_t>(d);
  if (static_cast<double>(i) != d) throw std::invalid_argument("'" + key + "' expects an integer, got '" + v + "'");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("'" + key + "' expects true/false, got '" + v + "'");
}

std::vector<int> to_shape(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    out.push_back(static_cast<int>(to_int(key, trim(part))));
  }
  if (out.empty()) throw std::invalid_argument("'" + key + "' expects comma-separated widths");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"algo", [](RunConfig& c, auto&, auto& v) { c.algo = parse_algo(v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
      {"total_steps", [](RunConfig& c, auto& k, auto& v) { c.total_steps = to_int(k, v); }},
      {"eval_every", [](RunConfig& c, auto& k, auto& v) { c.eval_every = to_int(k, v); }},
      {"eval_episodes", [](RunConfig& c, auto& k, auto& v) { c.eval_episodes = static_cast<int>(to_int(k, v)); }},
      {"checkpoint_every", [](RunConfig& c, auto& k, auto& v) { c.checkpoint_every = to_int(k, v); }},
      {"output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
      {"time_activation", [](RunConfig& c, auto&, auto& v) { c.sac.time_activation = parse_time_activation(v); }},
      // environment
      {"world_width", [](RunConfig& c, auto& k, auto& v) { c.env.world_size.x = to_double(k, v); }},
      {"world_height", [](RunConfig& c, auto& k, auto& v) { c.env.world_size.y = to_double(k, v); }},
      {"agent_mass", [](RunConfig& c, auto& k, auto& v) { c.env.agent_mass = to_double(k, v); }},
      {"gravity", [](RunConfig& c, auto& k, auto& v) { c.env.gravity = to_double(k, v); }},
      {"friction_mu", [](RunConfig& c, auto& k, auto& v) { c.env.friction_mu = to_double(k, v); }},
      {"obstacle_radius", [](RunConfig& c, auto& k, auto& v) { c.env.obstacle_radius = to_double(k, v); }},
      {"goal_radius", [](RunConfig& c, auto& k, auto& v) { c.env.goal_radius = to_double(k, v); }},
      {"min_spacing", [](RunConfig& c, auto& k, auto& v) { c.env.min_spacing = to_double(k, v); }},
      {"force_bound", [](RunConfig& c, auto& k, auto& v) { c.env.force_bound = to_double(k, v); }},
      {"duration_min", [](RunConfig& c, auto& k, auto& v) { c.env.duration_min = to_double(k, v); }},
      {"duration_max", [](RunConfig& c, auto& k, auto& v) { c.env.duration_max = to_double(k, v); }},
      {"speed_bound", [](RunConfig& c, auto& k, auto& v) { c.env.speed_bound = to_double(k, v); }},
      {"max_steps", [](RunConfig& c, auto& k, auto& v) { c.env.max_episode_steps = static_cast<int>(to_int(k, v)); }},
      {"normalize_observation", [](RunConfig& c, auto& k, auto& v) { c.env.normalize_observation = to_bool(k, v); }},
      // agent
      {"gamma", [](RunConfig& c, auto& k, auto& v) { c.sac.gamma = to_double(k, v); }},
      {"batch_size", [](RunConfig& c, auto& k, auto& v) { c.sac.batch_size = static_cast<int>(to_int(k, v)); }},
      {"alpha", [](RunConfig& c, auto& k, auto& v) { c.sac.alpha_init = to_double(k, v); }},
      {"auto_alpha", [](RunConfig& c, auto& k, auto& v) { c.sac.auto_alpha = to_bool(k, v); }},
      {"eta", [](RunConfig& c, auto& k, auto& v) { c.sac.target_entropy = to_double(k, v); }},
      {"polyak_tau", [](RunConfig& c, auto& k, auto& v) { c.sac.polyak_tau = to_double(k, v); }},
      {"a_lr", [](RunConfig& c, auto& k, auto& v) { c.sac.actor_lr = to_double(k, v); }},
      {"c_lr", [](RunConfig& c, auto& k, auto& v) { c.sac.critic_lr = to_double(k, v); }},
      {"num_critics", [](RunConfig& c, auto& k, auto& v) { c.sac.num_critics = static_cast<int>(to_int(k, v)); }},
      {"start_steps", [](RunConfig& c, auto& k, auto& v) { c.sac.start_steps = static_cast<int>(to_int(k, v)); }},
      {"updates_per_env_step", [](RunConfig& c, auto& k, auto& v) { c.sac.updates_per_env_step = static_cast<int>(to_int(k, v)); }},
      {"replay_size", [](RunConfig& c, auto& k, auto& v) { c.sac.replay_capacity = static_cast<std::size_t>(to_int(k, v)); }},
      {"net_shape", [](RunConfig& c, auto& k, auto& v) { c.sac.hidden_sizes = to_shape(k, v); }},
      {"fixed_frequency", [](RunConfig& c, auto& k, auto& v) { c.sac.fixed_duration = 1.0 / to_double(k, v); }},
      // reward
      {"alpha_t", [](RunConfig& c, auto& k, auto& v) { c.reward.alpha_t = to_double(k, v); }},
      {"alpha_eps", [](RunConfig& c, auto& k, auto& v) { c.reward.alpha_eps = to_double(k, v); }},
      {"alpha_tau", [](RunConfig& c, auto& k, auto& v) { c.reward.alpha_tau = to_double(k, v); }},
      {"epsilon", [](RunConfig& c, auto& k, auto& v) { c.reward.step_energy_eps = to_double(k, v); }},
      {"goal_bonus", [](RunConfig& c, auto& k, auto& v) { c.reward.goal_bonus = to_double(k, v); }},
      {"crash_penalty", [](RunConfig& c, auto& k, auto& v) { c.reward.crash_penalty = to_double(k, v); }},
      {"distance_coeff", [](RunConfig& c, auto& k, auto& v) { c.reward.distance_coeff = to_double(k, v); }},
  };
  return table;
}

}  // namespace

void RunConfig::finalize() {
  sac.mode = algo;
  env.validate();
  sac.validate();
  reward.validate();
  if (total_steps < 0) throw std::invalid_argument("total_steps must be non-negative");
  if (eval_every < 0 || checkpoint_every < 0) throw std::invalid_argument("schedules must be non-negative");
  if (eval_episodes <= 0) throw std::invalid_argument("eval_episodes must be positive");
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("unknown config key '" + key + "'");
  it->second(config, key, value);
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt::format("line {}: expected 'key = value'", lineno));
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      apply_setting(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string dump_run_config(const RunConfig& c) {
  std::string shape;
  for (std::size_t i = 0; i < c.sac.hidden_sizes.size(); ++i) {
    shape += (i ? "," : "") + std::to_string(c.sac.hidden_sizes[i]);
  }
  std::string out;
  auto line = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  line("algo", to_string(c.algo));
  line("seed", c.seed);
  line("total_steps", c.total_steps);
  line("eval_every", c.eval_every);
  line("eval_episodes", c.eval_episodes);
  line("checkpoint_every", c.checkpoint_every);
  line("output_dir", c.output_dir.string());
  line("time_activation", to_string(c.sac.time_activation));
  line("world_width", c.env.world_size.x);
  line("world_height", c.env.world_size.y);
  line("agent_mass", c.env.agent_mass);
  line("gravity", c.env.gravity);
  line("friction_mu", c.env.friction_mu);
  line("obstacle_radius", c.env.obstacle_radius);
  line("goal_radius", c.env.goal_radius);
  line("min_spacing", c.env.min_spacing);
  line("force_bound", c.env.force_bound);
  line("duration_min", c.env.duration_min);
  line("duration_max", c.env.duration_max);
  line("speed_bound", c.env.speed_bound);
  line("max_steps", c.env.max_episode_steps);
  line("normalize_observation", c.env.normalize_observation ? "true" : "false");
  line("gamma", c.sac.gamma);
  line("batch_size", c.sac.batch_size);
  line("alpha", c.sac.alpha_init);
  line("auto_alpha", c.sac.auto_alpha ? "true" : "false");
  line("eta", c.sac.target_entropy);
  line("polyak_tau", c.sac.polyak_tau);
  line("a_lr", c.sac.actor_lr);
  line("c_lr", c.sac.critic_lr);
  line("num_critics", c.sac.num_critics);
  line("start_steps", c.sac.start_steps);
  line("updates_per_env_step", c.sac.updates_per_env_step);
  line("replay_size", c.sac.replay_capacity);
  line("net_shape", shape);
  line("fixed_frequency", 1.0 / c.sac.fixed_duration);
  line("alpha_t", c.reward.alpha_t);
  line("alpha_eps", c.reward.alpha_eps);
  line("alpha_tau", c.reward.alpha_tau);
  line("epsilon", c.reward.step_energy_eps);
  line("goal_bonus", c.reward.goal_bonus);
  line("crash_penalty", c.reward.crash_penalty);
  line("distance_coeff", c.reward.distance_coeff);
  return out;
}

}  // namespace seac

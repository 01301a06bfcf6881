#include "seac/env/point_mass_env.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace seac {

void EnvConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
  };
  positive(world_size.x, "world_size.x");
  positive(world_size.y, "world_size.y");
  positive(agent_mass, "agent_mass");
  positive(gravity, "gravity");
  if (!(friction_mu >= 0.0) || !std::isfinite(friction_mu)) {
    throw std::invalid_argument("friction_mu must be non-negative and finite");
  }
  positive(obstacle_radius, "obstacle_radius");
  positive(goal_radius, "goal_radius");
  positive(min_spacing, "min_spacing");
  positive(force_bound, "force_bound");
  positive(duration_min, "duration_min");
  positive(duration_max, "duration_max");
  positive(speed_bound, "speed_bound");
  if (max_episode_steps <= 0) throw std::invalid_argument("max_episode_steps must be positive");
  if (duration_min >= duration_max) {
    throw std::invalid_argument("duration_min must be below duration_max");
  }
  const double half = 0.5 * std::min(world_size.x, world_size.y);
  if (goal_radius >= half || obstacle_radius >= half) {
    throw std::invalid_argument("goal/obstacle radius must be below half the world size");
  }
}

std::pair<EnvState, Observation> reset(std::uint64_t seed, const EnvConfig& config) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, config.world_size.x);
  std::uniform_real_distribution<double> uy(0.0, config.world_size.y);
  auto draw = [&] {
    const double x = ux(rng);
    return Vec2{x, uy(rng)};
  };

  EnvState s;
  s.agent_pos = draw();
  do {
    s.goal_pos = draw();
  } while (distance(s.goal_pos, s.agent_pos) < config.min_spacing);
  do {
    s.obstacle_pos = draw();
  } while (distance(s.obstacle_pos, s.agent_pos) < config.min_spacing ||
           distance(s.obstacle_pos, s.goal_pos) < config.min_spacing);
  return {s, observe(s, config)};
}

Observation observe(const EnvState& s, const EnvConfig& c) {
  Observation o{s.agent_pos.x,    s.agent_pos.y, s.obstacle_pos.x, s.obstacle_pos.y,
                s.goal_pos.x,     s.goal_pos.y,  s.agent_vel.x,    s.agent_vel.y,
                s.last_duration,  s.last_force.x, s.last_force.y};
  if (!c.normalize_observation) return o;

  for (int i = 0; i < 6; i += 2) {
    o[i] = 2.0 * o[i] / c.world_size.x - 1.0;
    o[i + 1] = 2.0 * o[i + 1] / c.world_size.y - 1.0;
  }
  o[6] /= c.speed_bound;
  o[7] /= c.speed_bound;
  o[8] = 2.0 * (o[8] - c.duration_min) / (c.duration_max - c.duration_min) - 1.0;
  o[9] /= c.force_bound;
  o[10] /= c.force_bound;
  return o;
}

void check_action(const ElasticAction& a, const EnvConfig& c) {
  if (!(a.duration >= c.duration_min && a.duration <= c.duration_max)) {
    throw std::invalid_argument("action duration " + std::to_string(a.duration) +
                                " outside [duration_min, duration_max]");
  }
  if (!(std::abs(a.force.x) <= c.force_bound && std::abs(a.force.y) <= c.force_bound)) {
    throw std::invalid_argument("action force outside [-force_bound, force_bound]");
  }
}

StepOutcome step(EnvState& state, const ElasticAction& action, const EnvConfig& config,
                 const RewardWeights& weights) {
  check_action(action, config);
  const Vec2 old_pos = state.agent_pos;
  const KinematicsResult next = integrate(state, action, config);

  state.agent_pos = next.pos;
  state.agent_vel = next.vel;
  state.last_duration = action.duration;
  state.last_force = action.force;
  ++state.step_count;

  StepOutcome out;
  out.reason = check_termination(old_pos, next.pos, state, config);
  out.terminal = out.reason != Termination::Running;
  out.distance_to_goal = distance(next.pos, state.goal_pos);
  out.reward = compute_reward(out.reason, out.distance_to_goal, action.duration, weights);
  out.observation = observe(state, config);
  return out;
}

PointMassEnv::PointMassEnv(EnvConfig config, RewardWeights weights)
    : config_(config), weights_(weights) {
  config_.validate();
  weights_.validate();
}

Observation PointMassEnv::reset(std::uint64_t seed) {
  auto [s, obs] = seac::reset(seed, config_);
  state_ = s;
  terminal_ = false;
  return obs;
}

StepOutcome PointMassEnv::step(const ElasticAction& action) {
  if (terminal_) throw std::logic_error("step() called on a finished episode; call reset()");
  StepOutcome out = seac::step(state_, action, config_, weights_);
  terminal_ = out.terminal;
  return out;
}

}  // namespace seac

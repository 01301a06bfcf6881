#include "seac/env/kinematics.h"

#include <algorithm>

namespace seac {

Vec2 apply_friction(const Vec2& f_aim, const Vec2& vel, const EnvConfig& config) {
  const double f_s = config.friction_force();
  const double speed = vel.norm();
  if (speed > 0.0) return f_aim - f_s * (vel / speed);
  const double f_mag = f_aim.norm();
  if (f_mag <= f_s) return {0.0, 0.0};
  return f_aim - f_s * (f_aim / f_mag);
}

KinematicsResult integrate(const EnvState& state, const ElasticAction& action,
                           const EnvConfig& config) {
  const double t = action.duration;
  const Vec2& v0 = state.agent_vel;

  const Vec2 f_true = apply_friction(action.force, v0, config);
  const Vec2 accel = f_true / config.agent_mass;
  Vec2 v_aim = v0 + accel * t;

  if (dot(v_aim, v0) < 0.0) {
    if (action.force.norm() <= config.friction_force()) {
      v_aim = {0.0, 0.0};
    } else {
      const Vec2 free = v0 + (action.force / config.agent_mass) * t;
      const double free_speed = free.norm();
      const double loss = config.friction_mu * config.gravity * t;
      v_aim = free_speed > loss ? free * ((free_speed - loss) / free_speed) : Vec2{0.0, 0.0};
    }
  }

  const double vb = config.speed_bound;
  v_aim.x = std::clamp(v_aim.x, -vb, vb);
  v_aim.y = std::clamp(v_aim.y, -vb, vb);

  const Vec2 disp = 0.5 * (v0 + v_aim) * t;
  Vec2 pos = state.agent_pos + disp;
  if (pos.x < 0.0 || pos.x > config.world_size.x) {
    pos.x = std::clamp(pos.x, 0.0, config.world_size.x);
    v_aim.x = 0.0;
  }
  if (pos.y < 0.0 || pos.y > config.world_size.y) {
    pos.y = std::clamp(pos.y, 0.0, config.world_size.y);
    v_aim.y = 0.0;
  }
  return {pos, v_aim};
}

Termination check_termination(const Vec2& old_pos, const Vec2& new_pos, const EnvState& state,
                              const EnvConfig& config) {
  if (segment_point_distance(old_pos, new_pos, state.goal_pos) <= config.goal_radius) {
    return Termination::GoalReached;
  }
  if (segment_point_distance(old_pos, new_pos, state.obstacle_pos) <= config.obstacle_radius) {
    return Termination::Crashed;
  }
  if (state.step_count >= config.max_episode_steps) return Termination::Timeout;
  return Termination::Running;
}

}  // namespace seac

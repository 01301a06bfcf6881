#pragma once

#include "seac/env/env_config.h"
#include "seac/env/vec2.h"
#include "seac/reward.h"

namespace seac {

/// One action of the elastic controller: hold `force` for `duration` seconds.
struct ElasticAction {
  double duration = 0.0;  // s
  Vec2 force;             // N
};

/// Mutable situation of one episode.
struct EnvState {
  Vec2 agent_pos;
  Vec2 agent_vel;
  Vec2 obstacle_pos;
  Vec2 goal_pos;
  double last_duration = 0.0;
  Vec2 last_force;
  int step_count = 0;
};

struct KinematicsResult {
  Vec2 pos;
  Vec2 vel;
};

/// Net force after Coulomb friction.
///
/// At rest, an applied force no larger than mu*m*g is cancelled entirely and a
/// larger one is reduced by mu*m*g along its own direction. While moving, a
/// kinetic friction force of magnitude mu*m*g opposes the velocity.
Vec2 apply_friction(const Vec2& f_aim, const Vec2& vel, const EnvConfig& config);

/// Advances the agent by one elastic step with constant net acceleration.
///
/// If the integrated velocity points against the pre-step velocity, friction
/// is not allowed to drive the reversal: a sub-threshold force stops the agent,
/// a larger one gives the frictionless velocity shortened by mu*g*T. Velocities
/// are clamped per axis to +-speed_bound and positions to the world box; an axis
/// that hits the wall loses its velocity component.
KinematicsResult integrate(const EnvState& state, const ElasticAction& action,
                           const EnvConfig& config);

/// Classifies the swept segment old_pos -> new_pos. Goal takes priority over crash.
/// `state.step_count` must already count the step being checked.
Termination check_termination(const Vec2& old_pos, const Vec2& new_pos, const EnvState& state,
                              const EnvConfig& config);

}  // namespace seac

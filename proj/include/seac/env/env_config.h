#pragma once

#include "seac/env/vec2.h"

namespace seac {

/// World constants of the point-mass navigation task.
struct EnvConfig {
  Vec2 world_size{2.0, 2.0};    // m
  double agent_mass = 20.0;      // kg
  double gravity = 9.80665;      // m/s^2
  double friction_mu = 0.6;
  double obstacle_radius = 0.05; // m
  double goal_radius = 0.05;     // m
  double min_spacing = 0.05;     // m, between agent, goal and obstacle at reset
  double force_bound = 100.0;    // N per axis
  double duration_min = 0.01;    // s
  double duration_max = 1.0;     // s
  double speed_bound = 2.0;      // m/s per axis
  int max_episode_steps = 500;
  /// Affinely map observations to roughly [-1, 1] instead of raw units.
  bool normalize_observation = false;

  /// Magnitude of the Coulomb friction force, mu * m * g.
  double friction_force() const { return friction_mu * agent_mass * gravity; }

  /// Throws std::invalid_argument when a constant is out of range.
  void validate() const;
};

}  // namespace seac

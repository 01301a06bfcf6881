#include <gtest/gtest.h>

#include <random>

#include "seac/env/kinematics.h"
#include "seac/env/point_mass_env.h"
#include "support/kinematics_oracle.h"

using namespace seac;

namespace {

EnvState at_rest(Vec2 pos) {
  EnvState s;
  s.agent_pos = pos;
  s.goal_pos = {1.9, 1.9};
  s.obstacle_pos = {0.1, 1.9};
  return s;
}

}  // namespace

TEST(Friction, SubThresholdForceAtRestIsCancelled) {
  const Vec2 f = apply_friction({50.0, -70.0}, {0.0, 0.0}, EnvConfig{});
  EXPECT_EQ(f.x, 0.0);
  EXPECT_EQ(f.y, 0.0);
}

TEST(Friction, SuperThresholdForceAtRestIsReducedAlongItself) {
  // 100 * (1 - 117.6798 / (100 sqrt 2))
  const Vec2 f = apply_friction({100.0, 100.0}, {0.0, 0.0}, EnvConfig{});
  EXPECT_NEAR(f.x, 16.787815411323336, 1e-12);
  EXPECT_NEAR(f.y, 16.787815411323336, 1e-12);
}

TEST(Friction, ZeroForceAtRest) {
  const Vec2 f = apply_friction({0.0, 0.0}, {0.0, 0.0}, EnvConfig{});
  EXPECT_EQ(f, (Vec2{0.0, 0.0}));
}

TEST(Friction, KineticFrictionOpposesVelocity) {
  const Vec2 f = apply_friction({0.0, 0.0}, {1.0, 0.0}, EnvConfig{});
  EXPECT_NEAR(f.x, -117.6798, 1e-12);
  EXPECT_EQ(f.y, 0.0);
}

TEST(Integrate, PaperExampleActionDoesNotMoveFromRest) {
  const EnvState s = at_rest({1.0, 1.0});
  const auto r = integrate(s, {0.2, {50.0, -70.0}}, EnvConfig{});
  EXPECT_EQ(r.pos, s.agent_pos);
  EXPECT_EQ(r.vel, (Vec2{0.0, 0.0}));
}

TEST(Integrate, DiagonalFullForceFromRest) {
  const EnvState s = at_rest({0.5, 0.5});
  const auto r = integrate(s, {1.0, {100.0, 100.0}}, EnvConfig{});
  EXPECT_NEAR(r.vel.x, 0.8393907705661668, 1e-12);
  EXPECT_NEAR(r.vel.y, 0.8393907705661668, 1e-12);
  EXPECT_NEAR(r.pos.x - 0.5, 0.4196953852830834, 1e-12);
  EXPECT_NEAR(r.pos.y - 0.5, 0.4196953852830834, 1e-12);
}

TEST(Integrate, FrictionStopsButNeverReverses) {
  EnvState s = at_rest({1.0, 1.0});
  s.agent_vel = {0.5, 0.0};
  const auto r = integrate(s, {1.0, {0.0, 0.0}}, EnvConfig{});
  EXPECT_EQ(r.vel, (Vec2{0.0, 0.0}));
  EXPECT_NEAR(r.pos.x, 1.25, 1e-12);  // D = (0.5 + 0) / 2 * 1
}

TEST(Integrate, WallClampsPositionAndZeroesThatAxis) {
  EnvState s = at_rest({1.95, 1.0});
  s.agent_vel = {2.0, 0.5};
  const auto r = integrate(s, {0.5, {100.0, 100.0}}, EnvConfig{});
  EXPECT_EQ(r.pos.x, 2.0);
  EXPECT_EQ(r.vel.x, 0.0);
  EXPECT_GT(r.vel.y, 0.0);
}

TEST(Integrate, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.0, 2.0), vel(-2.0, 2.0), force(-100.0, 100.0), dur(0.01, 1.0);
  std::bernoulli_distribution rest(0.2);
  for (int i = 0; i < 2000; ++i) {
    EnvState s = at_rest({pos(rng), pos(rng)});
    if (!rest(rng)) s.agent_vel = {vel(rng), vel(rng)};
    const ElasticAction a{dur(rng), {force(rng), force(rng)}};
    const auto r = integrate(s, a, EnvConfig{});
    const auto o = oracle::integrate(s.agent_pos.x, s.agent_pos.y, s.agent_vel.x, s.agent_vel.y, a.duration,
                                     a.force.x, a.force.y);
    ASSERT_NEAR(r.pos.x, o.px, 1e-9);
    ASSERT_NEAR(r.pos.y, o.py, 1e-9);
    ASSERT_NEAR(r.vel.x, o.vx, 1e-9);
    ASSERT_NEAR(r.vel.y, o.vy, 1e-9);
  }
}

TEST(IntegrateProperty, FrictionIsDissipative) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 2.0), vel(-2.0, 2.0), force(-100.0, 100.0), dur(0.01, 1.0);
  const EnvConfig cfg;
  for (int i = 0; i < 10000; ++i) {
    EnvState s = at_rest({pos(rng), pos(rng)});
    s.agent_vel = i % 5 == 0 ? Vec2{} : Vec2{vel(rng), vel(rng)};
    const ElasticAction a{dur(rng), {force(rng), force(rng)}};
    const auto r = integrate(s, a, cfg);
    const double frictionless = (s.agent_vel + (a.force / cfg.agent_mass) * a.duration).norm();
    ASSERT_LE(r.vel.norm(), frictionless + 1e-12) << "case " << i;
    ASSERT_LE(std::abs(r.vel.x), 2.0);
    ASSERT_LE(std::abs(r.vel.y), 2.0);
    ASSERT_GE(r.pos.x, 0.0);
    ASSERT_LE(r.pos.x, 2.0);
    ASSERT_GE(r.pos.y, 0.0);
    ASSERT_LE(r.pos.y, 2.0);
  }
}

TEST(IntegrateProperty, SubThresholdForceFromRestNeverMoves) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(0.0, 2.0), force(-100.0, 100.0), dur(0.01, 1.0);
  const EnvConfig cfg;
  int checked = 0;
  while (checked < 5000) {
    const Vec2 f{force(rng), force(rng)};
    if (f.norm() > cfg.friction_force()) continue;
    const EnvState s = at_rest({pos(rng), pos(rng)});
    const auto r = integrate(s, {dur(rng), f}, cfg);
    ASSERT_EQ(r.pos, s.agent_pos);
    ASSERT_EQ(r.vel, (Vec2{0.0, 0.0}));
    ++checked;
  }
}

TEST(Termination, ZeroLengthSegmentOnGoal) {
  EnvState s = at_rest({1.0, 1.0});
  s.goal_pos = {1.0, 1.0};
  s.step_count = 1;
  EXPECT_EQ(check_termination(s.goal_pos, s.goal_pos, s, EnvConfig{}), Termination::GoalReached);
}

TEST(Termination, ObstacleOnSweptPath) {
  EnvState s = at_rest({0.5, 0.5});
  s.obstacle_pos = {1.0, 0.5};
  s.step_count = 1;
  EXPECT_EQ(check_termination({0.5, 0.5}, {1.5, 0.5}, s, EnvConfig{}), Termination::Crashed);
}

TEST(Termination, TimeoutAtStepLimit) {
  EnvState s = at_rest({1.0, 1.0});
  s.step_count = 500;
  EXPECT_EQ(check_termination({1.0, 1.0}, {1.0, 1.0}, s, EnvConfig{}), Termination::Timeout);
  s.step_count = 499;
  EXPECT_EQ(check_termination({1.0, 1.0}, {1.0, 1.0}, s, EnvConfig{}), Termination::Running);
}

TEST(Termination, GoalWinsTieWithObstacle) {
  EnvState s = at_rest({0.0, 0.5});
  s.goal_pos = {1.0, 0.5};
  s.obstacle_pos = {1.02, 0.5};
  s.step_count = 1;
  EXPECT_EQ(check_termination({0.0, 0.5}, {2.0, 0.5}, s, EnvConfig{}), Termination::GoalReached);
}

TEST(Reset, DeterministicPerSeed) {
  const EnvConfig cfg;
  const auto [a, oa] = reset(123, cfg);
  const auto [b, ob] = reset(123, cfg);
  EXPECT_EQ(oa, ob);
  EXPECT_EQ(a.goal_pos, b.goal_pos);
  const auto [c, oc] = reset(124, cfg);
  EXPECT_NE(oa, oc);
}

TEST(Reset, SpacingAndZeroedHistoryOverManySeeds) {
  const EnvConfig cfg;
  double worst = 1e9;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto [s, o] = reset(seed, cfg);
    worst = std::min({worst, distance(s.agent_pos, s.goal_pos), distance(s.agent_pos, s.obstacle_pos),
                      distance(s.goal_pos, s.obstacle_pos)});
    ASSERT_EQ(o[6], 0.0);
    ASSERT_EQ(o[7], 0.0);
    ASSERT_EQ(o[8], 0.0);
    ASSERT_EQ(o[9], 0.0);
    ASSERT_EQ(o[10], 0.0);
    ASSERT_EQ(s.step_count, 0);
  }
  EXPECT_GE(worst, 0.05);
}

TEST(Step, RecordsHistoryAndDistance) {
  PointMassEnv env;
  env.reset(5);
  const ElasticAction a{0.37, {100.0, -100.0}};
  const StepOutcome out = env.step(a);
  EXPECT_EQ(out.observation[8], 0.37);
  EXPECT_EQ(out.observation[9], 100.0);
  EXPECT_EQ(out.observation[10], -100.0);
  EXPECT_DOUBLE_EQ(out.distance_to_goal, distance(env.state().agent_pos, env.state().goal_pos));
  EXPECT_EQ(out.observation[0], env.state().agent_pos.x);
  EXPECT_EQ(out.observation[4], env.state().goal_pos.x);
  EXPECT_EQ(env.state().step_count, 1);
}

TEST(Step, ReplayIsDeterministic) {
  auto run = [] {
    PointMassEnv env;
    env.reset(77);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> f(-100.0, 100.0), t(0.01, 1.0);
    std::vector<StepOutcome> outs;
    while (!env.terminal()) outs.push_back(env.step({t(rng), {f(rng), f(rng)}}));
    return outs;
  };
  const auto a = run();
  const auto b = run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].observation, b[i].observation);
    EXPECT_EQ(a[i].reward.total, b[i].reward.total);
    EXPECT_EQ(a[i].reason, b[i].reason);
  }
}

TEST(Step, SteppingFinishedEpisodeIsAnError) {
  EnvConfig cfg;
  cfg.max_episode_steps = 1;
  PointMassEnv env(cfg);
  env.reset(1);
  const StepOutcome out = env.step({0.5, {0.0, 0.0}});
  EXPECT_TRUE(out.terminal);
  EXPECT_THROW(env.step({0.5, {0.0, 0.0}}), std::logic_error);
}

TEST(Step, RejectsOutOfRangeActions) {
  PointMassEnv env;
  env.reset(1);
  EXPECT_THROW(env.step({0.005, {0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(env.step({1.5, {0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(env.step({0.5, {100.5, 0.0}}), std::invalid_argument);
}

TEST(Observation, NormalizationMapsIntoUnitBox) {
  EnvConfig cfg;
  cfg.normalize_observation = true;
  PointMassEnv env(cfg);
  env.reset(9);
  const StepOutcome out = env.step({1.0, {100.0, -100.0}});
  for (int i = 0; i < 11; ++i) {
    EXPECT_GE(out.observation[i], -1.0 - 1e-12) << i;
    EXPECT_LE(out.observation[i], 1.0 + 1e-12) << i;
  }
  EXPECT_DOUBLE_EQ(out.observation[8], 1.0);
  EXPECT_DOUBLE_EQ(out.observation[9], 1.0);
}

TEST(Config, ValidationCatchesBadValues) {
  EnvConfig cfg;
  cfg.duration_min = 1.0;
  cfg.duration_max = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = EnvConfig{};
  cfg.goal_radius = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_NO_THROW(EnvConfig{}.validate());
}

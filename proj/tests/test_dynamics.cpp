/*
 * Copyright (C) 2026 The infoprobe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include <infoprobe/dynamics.hpp>
#include <infoprobe/errors.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace infoprobe;

namespace {

JointState single(double x, double v)
{
  JointState s;
  s.robot = {x, v, kOuterLane};
  s.human = {x - 1000.0, 0.0, kOuterLane};
  return s;
}

/// Reference IDM written out term by term.
double reference_idm(double v, double gap, double v_lead, const IdmParams& p)
{
  const double s_star = p.d_min + std::max(0.0, p.tau_gap * v
    + v * (v - v_lead) / (2.0 * std::sqrt(p.u_max * p.b_pref)));
  const double a = p.u_max * (1.0 - std::pow(v / p.v_des, 4)
    - std::pow(s_star / gap, 2));
  return std::clamp(a, -kHardBraking, p.u_max);
}

} // namespace

TEST(JointStep, Coasting)
{
  const auto next = joint_step(single(0.0, 10.0), Control{}, Control{}, {},
    DynamicsConfig::defaults());
  EXPECT_DOUBLE_EQ(next.robot.position, 1.0);
  EXPECT_DOUBLE_EQ(next.robot.velocity, 10.0);
  EXPECT_DOUBLE_EQ(next.time, 0.1);
}

TEST(JointStep, PositionUsesPreUpdateVelocity)
{
  const auto next = joint_step(single(0.0, 10.0), Control{1.0, {}}, Control{},
    {}, DynamicsConfig::defaults());
  EXPECT_DOUBLE_EQ(next.robot.position, 1.0);
  EXPECT_DOUBLE_EQ(next.robot.velocity, 10.1);
}

TEST(JointStep, VelocitySaturatesAtZero)
{
  const auto next = joint_step(single(0.0, 0.05), Control{-1.0, {}},
    Control{}, {}, DynamicsConfig::defaults());
  EXPECT_EQ(next.robot.velocity, 0.0);
}

TEST(JointStep, RobotSpeedLimit)
{
  auto config = DynamicsConfig::defaults();
  config.robot_speed_limit = 20.0;
  const auto next = joint_step(single(0.0, 19.95), Control{2.0, {}},
    Control{}, {}, config);
  EXPECT_EQ(next.robot.velocity, 20.0);
}

TEST(JointStep, LaneChangeIsInstant)
{
  JointState s = single(0.0, 10.0);
  const auto next = joint_step(s, Control{0.0, kInnerLane},
    Control{0.0, kInnerLane}, {}, DynamicsConfig::defaults());
  EXPECT_EQ(next.robot.lane, kInnerLane);
  EXPECT_EQ(next.human.lane, kInnerLane);
}

TEST(JointStep, BackgroundAccelerations)
{
  JointState s = single(0.0, 10.0);
  s.background = {{50.0, 20.0, kInnerLane}, {80.0, 5.0, kInnerLane}};
  const std::vector<double> accels{1.0, -2.0};
  const auto next = joint_step(s, Control{}, Control{}, accels,
    DynamicsConfig::defaults());
  EXPECT_DOUBLE_EQ(next.background[0].position, 52.0);
  EXPECT_DOUBLE_EQ(next.background[0].velocity, 20.1);
  EXPECT_DOUBLE_EQ(next.background[1].velocity, 4.8);

  const std::vector<double> wrong{1.0};
  EXPECT_THROW(joint_step(s, Control{}, Control{}, wrong,
    DynamicsConfig::defaults()), InvalidArgument);
}

TEST(JointStep, AffineInControls)
{
  JointState s;
  s.robot = {30.0, 18.0, kOuterLane};
  s.human = {0.0, 21.0, kOuterLane};
  const auto config = DynamicsConfig::defaults();
  const double u1 = 1.5, u2 = -2.0, h1 = 0.5, h2 = -1.0;
  const auto a = joint_step(s, Control{u1, {}}, Control{h1, {}}, {}, config);
  const auto b = joint_step(s, Control{u2, {}}, Control{h2, {}}, {}, config);
  for (const double alpha : {0.0, 0.5, 1.0})
  {
    const auto mix = joint_step(s,
      Control{alpha * u1 + (1 - alpha) * u2, {}},
      Control{alpha * h1 + (1 - alpha) * h2, {}}, {}, config);
    EXPECT_NEAR(mix.robot.position,
      alpha * a.robot.position + (1 - alpha) * b.robot.position, 1e-12);
    EXPECT_NEAR(mix.robot.velocity,
      alpha * a.robot.velocity + (1 - alpha) * b.robot.velocity, 1e-12);
    EXPECT_NEAR(mix.human.position,
      alpha * a.human.position + (1 - alpha) * b.human.position, 1e-12);
    EXPECT_NEAR(mix.human.velocity,
      alpha * a.human.velocity + (1 - alpha) * b.human.velocity, 1e-12);
  }
}

TEST(JointStep, Deterministic)
{
  JointState s = single(3.0, 12.0);
  s.background = {{40.0, 20.0, kInnerLane}};
  const std::vector<double> accels{0.3};
  const auto config = DynamicsConfig::defaults();
  EXPECT_EQ(joint_step(s, Control{0.7, {}}, Control{}, accels, config),
    joint_step(s, Control{0.7, {}}, Control{}, accels, config));
}

TEST(Idm, FreeRoadEquilibrium)
{
  const IdmParams p;
  EXPECT_EQ(idm_accel(VehicleState{0.0, p.v_des, kOuterLane}, std::nullopt, p),
    0.0);
}

TEST(Idm, StandstillEquilibrium)
{
  const IdmParams p;
  EXPECT_EQ(idm_accel(0.0, p.d_min, 0.0, p), 0.0);
}

TEST(Idm, WorkedExample)
{
  IdmParams p;
  p.u_max = 0.73;
  p.b_pref = 1.67;
  p.v_des = 25.0;
  p.tau_gap = 1.5;
  p.d_min = 2.0;
  // d_des = 2 + 1.5 * 20 = 32; 0.73 * (1 - 0.8^4 - 0.32^2)
  EXPECT_DOUBLE_EQ(idm_desired_gap(20.0, 20.0, p), 32.0);
  EXPECT_NEAR(idm_accel(20.0, 100.0, 20.0, p), 0.73 * (1 - 0.4096 - 0.1024),
    1e-12);
  EXPECT_NEAR(idm_accel(20.0, 100.0, 20.0, p), 0.35624, 1e-12);
}

TEST(Idm, ClosingSpeedWidensDesiredGap)
{
  const IdmParams p;
  const double expected = p.d_min + p.tau_gap * 20.0
    + 20.0 * 5.0 / (2.0 * std::sqrt(p.u_max * p.b_pref));
  EXPECT_NEAR(idm_desired_gap(20.0, 15.0, p), expected, 1e-12);
  EXPECT_GT(idm_desired_gap(20.0, 15.0, p), idm_desired_gap(20.0, 20.0, p));
  EXPECT_NEAR(idm_accel(20.0, 60.0, 15.0, p),
    reference_idm(20.0, 60.0, 15.0, p), 1e-12);
}

TEST(Idm, DesiredGapNeverBelowJamDistance)
{
  const IdmParams p;
  EXPECT_DOUBLE_EQ(idm_desired_gap(10.0, 30.0, p), p.d_min);
  EXPECT_NEAR(idm_accel(10.0, 20.0, 30.0, p),
    reference_idm(10.0, 20.0, 30.0, p), 1e-12);
}

TEST(Idm, ClampedToHardBrakingAndUmax)
{
  const IdmParams p;
  EXPECT_EQ(idm_accel(25.0, 1.0, 0.0, p), -kHardBraking);
  EXPECT_EQ(idm_accel(0.0, std::numeric_limits<double>::infinity(), 0.0, p),
    p.u_max);
}

TEST(Idm, RejectsNonPositiveGap)
{
  const IdmParams p;
  EXPECT_THROW(idm_accel(10.0, 0.0, 10.0, p), NonPositiveGap);
  EXPECT_THROW(idm_accel(10.0, -3.0, 10.0, p), NonPositiveGap);
}

TEST(Idm, NonincreasingInVelocity)
{
  const IdmParams p;
  double previous = std::numeric_limits<double>::infinity();
  for (double v = 0.0; v <= p.v_des; v += 0.25)
  {
    const double a = idm_accel(v, 500.0, 20.0, p);
    EXPECT_LE(a, previous + 1e-15) << "v = " << v;
    EXPECT_LE(a, p.u_max);
    previous = a;
  }
}

TEST(Idm, ApproachesZeroNearFreeRoadEquilibrium)
{
  const IdmParams p;
  EXPECT_LT(std::abs(idm_accel(p.v_des - 1e-6, 1e9, p.v_des, p)), 1e-6);
}

TEST(Neighbours, LeaderAndFollowerPerLane)
{
  JointState s;
  s.robot = {100.0, 20.0, kOuterLane};
  s.human = {0.0, 20.0, kOuterLane};
  s.background = {{50.0, 20.0, kInnerLane}, {150.0, 20.0, kInnerLane},
    {60.0, 20.0, kOuterLane}};

  EXPECT_EQ(find_leader(s, VehicleId::human()), VehicleId::background(2));
  EXPECT_EQ(find_leader(s, VehicleId::human(), kInnerLane),
    VehicleId::background(0));
  EXPECT_EQ(find_follower(s, VehicleId::robot()), VehicleId::background(2));
  EXPECT_FALSE(find_leader(s, VehicleId::robot()).has_value());
  EXPECT_FALSE(find_follower(s, VehicleId::background(0)).has_value());
  EXPECT_EQ(find_follower(s, VehicleId::background(1)),
    VehicleId::background(0));
}

TEST(Neighbours, BackgroundIdmFollowsSameLaneLeader)
{
  JointState s;
  s.robot = {1000.0, 20.0, kOuterLane};
  s.human = {-1000.0, 20.0, kOuterLane};
  s.background = {{0.0, 20.0, kInnerLane}, {100.0, 20.0, kInnerLane}};
  const std::vector<IdmParams> params(2);
  const auto a = background_idm_accels(s, params);
  EXPECT_NEAR(a[0], reference_idm(20.0, 100.0, 20.0, params[0]), 1e-12);
  EXPECT_NEAR(a[1], reference_idm(20.0, std::numeric_limits<double>::infinity(),
    20.0, params[1]), 1e-12);
}

TEST(UniformGrid, ExactZero)
{
  const auto g = uniform_grid(-3.0, 2.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), -3.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(g[6], 0.0);
}

TEST(DynamicsConfig, Validation)
{
  auto c = DynamicsConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = DynamicsConfig::defaults();
  c.human_accel_grid = {-1.0, 1.0};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = DynamicsConfig::defaults();
  c.robot_accel_grid = {-4.0, 0.0};
  EXPECT_THROW(c.validate(), InvalidArgument);
}

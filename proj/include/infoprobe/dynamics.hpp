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

#ifndef INFOPROBE__DYNAMICS_HPP
#define INFOPROBE__DYNAMICS_HPP

#include <infoprobe/model.hpp>

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace infoprobe {

/// Every IDM output is clamped from below by this deceleration (m/s^2).
inline constexpr double kHardBraking = 4.0;

/// Intelligent driver model constants.
struct IdmParams
{
  double u_max = 0.73;    // maximum acceleration, m/s^2
  double b_pref = 1.67;   // comfortable braking, m/s^2
  double v_des = 25.0;    // desired velocity, m/s
  double tau_gap = 1.5;   // desired time gap, s
  double d_min = 2.0;     // jam distance, m

  /// Throws InvalidArgument unless every constant is strictly positive.
  void validate() const;
};

struct DynamicsConfig
{
  double dt = 0.1;
  double robot_accel_min = -3.0;
  double robot_accel_max = 2.0;
  std::vector<double> robot_accel_grid;
  std::vector<double> human_accel_grid;
  /// Upper bound on the robot's speed. The robot's velocity saturates here the
  /// same way every velocity saturates at zero.
  double robot_speed_limit = std::numeric_limits<double>::infinity();

  /// 11 robot and 11 human accelerations spanning [-3, 2] m/s^2.
  static DynamicsConfig defaults();

  /// Throws InvalidArgument on a non-positive dt or a malformed grid.
  void validate() const;
};

/// count values evenly spanning [lo, hi], with exact zeros where the grid
/// crosses zero.
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

/// Advances every vehicle by one explicit Euler step of length dt.
/// background_accels is either empty (all zero) or one entry per background
/// vehicle. Lane changes take effect instantly.
JointState joint_step(
  const JointState& state,
  const Control& robot_u,
  const Control& human_u,
  std::span<const double> background_accels,
  const DynamicsConfig& config);

/// Same as above with an explicit step length, used by the planners which run
/// on a coarser clock than the simulation.
JointState joint_step(
  const JointState& state,
  const Control& robot_u,
  const Control& human_u,
  std::span<const double> background_accels,
  const DynamicsConfig& config,
  double dt);

/// IDM acceleration for a follower behind a leader gap metres ahead that
/// travels at leader_velocity. Pass an infinite gap for a free road. The
/// result is clamped to [-kHardBraking, u_max]. Throws NonPositiveGap.
double idm_accel(double velocity, double gap, double leader_velocity,
  const IdmParams& params);

/// IDM acceleration of follower with respect to leader (nullopt means a free
/// road). The leader must be ahead in the same lane.
double idm_accel(const VehicleState& follower,
  const std::optional<VehicleState>& leader, const IdmParams& params);

/// The IDM desired gap d_des at the given speeds: d_min plus the
/// nonnegative part of the speed-dependent term.
double idm_desired_gap(double velocity, double leader_velocity,
  const IdmParams& params);

//==============================================================================
/// Identifies one vehicle inside a JointState.
struct VehicleId
{
  enum class Role { Robot, Human, Background };

  Role role = Role::Robot;
  std::size_t index = 0;

  static VehicleId robot() { return {Role::Robot, 0}; }
  static VehicleId human() { return {Role::Human, 0}; }
  static VehicleId background(std::size_t i) { return {Role::Background, i}; }

  bool operator==(const VehicleId&) const = default;
};

const VehicleState& vehicle(const JointState& state, VehicleId id);

/// Nearest vehicle strictly ahead of id in lane (defaults to id's own lane).
std::optional<VehicleId> find_leader(const JointState& state, VehicleId id,
  std::optional<int> lane = std::nullopt);

/// Nearest vehicle strictly behind id in lane (defaults to id's own lane).
std::optional<VehicleId> find_follower(const JointState& state, VehicleId id,
  std::optional<int> lane = std::nullopt);

/// IDM accelerations for every background vehicle, each following its own
/// same-lane leader. params holds one entry per background vehicle.
std::vector<double> background_idm_accels(const JointState& state,
  std::span<const IdmParams> params);

} // namespace infoprobe

#endif // INFOPROBE__DYNAMICS_HPP

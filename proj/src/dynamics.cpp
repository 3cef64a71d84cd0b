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

#include <algorithm>
#include <cmath>
#include <string>

namespace infoprobe {

namespace {

bool strictly_increasing(const std::vector<double>& grid)
{
  return std::adjacent_find(grid.begin(), grid.end(),
      [](double a, double b) { return !(a < b); }) == grid.end();
}

bool contains_zero(const std::vector<double>& grid)
{
  return std::find(grid.begin(), grid.end(), 0.0) != grid.end();
}

VehicleState advance(const VehicleState& v, const Control& u, double dt,
  double speed_limit = std::numeric_limits<double>::infinity())
{
  VehicleState next = v;
  next.position = v.position + v.velocity * dt;
  next.velocity = std::min(speed_limit,
      std::max(0.0, v.velocity + u.acceleration * dt));
  if (u.lane_change)
    next.lane = *u.lane_change;
  return next;
}

} // anonymous namespace

//==============================================================================
void IdmParams::validate() const
{
  if (!(u_max > 0.0 && b_pref > 0.0 && v_des > 0.0 && tau_gap > 0.0
    && d_min > 0.0))
  {
    throw InvalidArgument("IDM constants must all be strictly positive");
  }
}

//==============================================================================
std::vector<double> uniform_grid(double lo, double hi, std::size_t count)
{
  if (count == 1)
    return {lo};

  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    const double x = lo + (hi - lo) * static_cast<double>(k)
      / static_cast<double>(count - 1);
    grid[k] = std::abs(x) < 1e-12 ? 0.0 : x;
  }
  return grid;
}

//==============================================================================
DynamicsConfig DynamicsConfig::defaults()
{
  DynamicsConfig config;
  config.robot_accel_grid = uniform_grid(-3.0, 2.0, 11);
  config.human_accel_grid = uniform_grid(-3.0, 2.0, 11);
  return config;
}

//==============================================================================
void DynamicsConfig::validate() const
{
  if (!(dt > 0.0))
    throw InvalidArgument("dt must be positive");
  if (!(robot_accel_min <= 0.0 && 0.0 <= robot_accel_max))
    throw InvalidArgument("robot acceleration bounds must bracket zero");

  for (const auto* grid : {&robot_accel_grid, &human_accel_grid})
  {
    if (grid->empty() || !strictly_increasing(*grid) || !contains_zero(*grid))
    {
      throw InvalidArgument(
        "acceleration grids must be nonempty, strictly increasing and "
        "contain zero");
    }
  }

  if (robot_accel_grid.front() < robot_accel_min
    || robot_accel_grid.back() > robot_accel_max)
  {
    throw InvalidArgument("robot grid exceeds the robot acceleration bounds");
  }

  if (!(robot_speed_limit > 0.0))
    throw InvalidArgument("robot speed limit must be positive");
}

//==============================================================================
JointState joint_step(
  const JointState& state,
  const Control& robot_u,
  const Control& human_u,
  std::span<const double> background_accels,
  const DynamicsConfig& config)
{
  return joint_step(
    state, robot_u, human_u, background_accels, config, config.dt);
}

//==============================================================================
JointState joint_step(
  const JointState& state,
  const Control& robot_u,
  const Control& human_u,
  std::span<const double> background_accels,
  const DynamicsConfig& config,
  double dt)
{
  if (!background_accels.empty()
    && background_accels.size() != state.background.size())
  {
    throw InvalidArgument("expected one background acceleration per vehicle");
  }

  JointState next;
  next.robot = advance(state.robot, robot_u, dt, config.robot_speed_limit);
  next.human = advance(state.human, human_u, dt);
  next.background.reserve(state.background.size());
  for (std::size_t i = 0; i < state.background.size(); ++i)
  {
    const double a = background_accels.empty() ? 0.0 : background_accels[i];
    next.background.push_back(advance(state.background[i], Control{a, {}}, dt));
  }
  next.time = state.time + dt;
  return next;
}

//==============================================================================
double idm_desired_gap(double velocity, double leader_velocity,
  const IdmParams& params)
{
  // The maximum acceleration in the interaction term is the same u_max.
  return params.d_min + std::max(0.0, params.tau_gap * velocity
    + velocity * (velocity - leader_velocity)
    / (2.0 * std::sqrt(params.u_max * params.b_pref)));
}

//==============================================================================
double idm_accel(double velocity, double gap, double leader_velocity,
  const IdmParams& params)
{
  if (!(gap > 0.0))
    throw NonPositiveGap("gap to leader is " + std::to_string(gap) + " m");

  const double free_term = std::pow(velocity / params.v_des, 4);
  double interaction = 0.0;
  if (std::isfinite(gap))
  {
    const double ratio = idm_desired_gap(velocity, leader_velocity, params)
      / gap;
    interaction = ratio * ratio;
  }

  const double accel = params.u_max * (1.0 - free_term - interaction);
  return std::clamp(accel, -kHardBraking, params.u_max);
}

//==============================================================================
double idm_accel(const VehicleState& follower,
  const std::optional<VehicleState>& leader, const IdmParams& params)
{
  if (!leader)
  {
    return idm_accel(follower.velocity,
      std::numeric_limits<double>::infinity(), follower.velocity, params);
  }

  return idm_accel(follower.velocity, leader->position - follower.position,
    leader->velocity, params);
}

//==============================================================================
const VehicleState& vehicle(const JointState& state, VehicleId id)
{
  switch (id.role)
  {
    case VehicleId::Role::Robot:
      return state.robot;
    case VehicleId::Role::Human:
      return state.human;
    case VehicleId::Role::Background:
      break;
  }

  if (id.index >= state.background.size())
    throw IndexOutOfRange("background vehicle " + std::to_string(id.index));
  return state.background[id.index];
}

namespace {

/// direction = +1 searches ahead, -1 behind.
std::optional<VehicleId> nearest_in_lane(const JointState& state, VehicleId id,
  std::optional<int> lane, int direction)
{
  const VehicleState& self = vehicle(state, id);
  const int target_lane = lane.value_or(self.lane);

  std::optional<VehicleId> best;
  double best_distance = std::numeric_limits<double>::infinity();
  const auto consider = [&](VehicleId other)
    {
      if (other == id)
        return;
      const VehicleState& v = vehicle(state, other);
      const double distance = direction * (v.position - self.position);
      if (v.lane == target_lane && distance > 0.0 && distance < best_distance)
      {
        best = other;
        best_distance = distance;
      }
    };

  consider(VehicleId::robot());
  consider(VehicleId::human());
  for (std::size_t i = 0; i < state.background.size(); ++i)
    consider(VehicleId::background(i));

  return best;
}

} // anonymous namespace

//==============================================================================
std::optional<VehicleId> find_leader(const JointState& state, VehicleId id,
  std::optional<int> lane)
{
  return nearest_in_lane(state, id, lane, +1);
}

//==============================================================================
std::optional<VehicleId> find_follower(const JointState& state, VehicleId id,
  std::optional<int> lane)
{
  return nearest_in_lane(state, id, lane, -1);
}

//==============================================================================
std::vector<double> background_idm_accels(const JointState& state,
  std::span<const IdmParams> params)
{
  if (params.size() != state.background.size())
    throw InvalidArgument("expected one IDM parameter set per background car");

  std::vector<double> accels(state.background.size());
  for (std::size_t i = 0; i < accels.size(); ++i)
  {
    const auto leader = find_leader(state, VehicleId::background(i));
    std::optional<VehicleState> lead_state;
    if (leader)
      lead_state = vehicle(state, *leader);
    accels[i] = idm_accel(state.background[i], lead_state, params[i]);
  }
  return accels;
}

} // namespace infoprobe

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

#include <infoprobe/inference.hpp>
#include <infoprobe/detail/human_response.hpp>
#include <infoprobe/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace infoprobe {

namespace {

constexpr double kPenaltyCap = 10.0;

/// Position and velocity after holding accel for duration, stopping at zero.
std::pair<double, double> hold(double position, double velocity, double accel,
  double duration)
{
  const double v = velocity + accel * duration;
  if (v >= 0.0)
    return {position + velocity * duration + 0.5 * accel * duration * duration,
      v};

  return {position - velocity * velocity / (2.0 * accel), 0.0};
}

} // anonymous namespace

//==============================================================================
void HumanUtilityModel::validate() const
{
  if (w_speed < 0.0 || w_headway < 0.0 || w_safety < 0.0)
    throw InvalidArgument("utility weights must be nonnegative");
  if (!(rationality_beta > 0.0))
    throw InvalidArgument("rationality beta must be positive");
  if (!(safety_distance > 0.0))
    throw InvalidArgument("safety distance must be positive");
  if (!(horizon > 0.0))
    throw InvalidArgument("human model horizon must be positive");
}

//==============================================================================
double safety_penalty(double gap, double safety_distance)
{
  if (!(gap > 0.0))
    return kPenaltyCap;
  const double ratio = safety_distance / gap;
  return std::min(ratio * ratio, kPenaltyCap);
}

//==============================================================================
JointState human_successor(const JointState& state, const Control& robot_u,
  const Control& human_u, double horizon)
{
  JointState next = state;
  std::tie(next.robot.position, next.robot.velocity) = hold(
    state.robot.position, state.robot.velocity, robot_u.acceleration, horizon);
  std::tie(next.human.position, next.human.velocity) = hold(
    state.human.position, state.human.velocity, human_u.acceleration, horizon);
  for (auto& b : next.background)
    b.position += b.velocity * horizon;

  if (robot_u.lane_change)
    next.robot.lane = *robot_u.lane_change;
  if (human_u.lane_change)
    next.human.lane = *human_u.lane_change;
  next.time = state.time + horizon;
  return next;
}

namespace detail {

//==============================================================================
double utility_from_features(const HumanUtilityModel& model,
  double target, double velocity, double gap)
{
  if (model.grid.kind() == HypothesisKind::DesiredVelocity)
  {
    const double dv = velocity - target;
    return -model.w_speed * dv * dv
      - model.w_safety * safety_penalty(gap, model.safety_distance);
  }

  const double headway = std::min(gap, model.headway_cap);
  const double dh = headway - target;
  const double dv = velocity - model.reference_velocity;
  return -model.w_headway * dh * dh - model.w_speed * dv * dv;
}

//==============================================================================
SuccessorFeatures successor_features(const JointState& state,
  const Control& robot_u, const HumanUtilityModel& model,
  const DynamicsConfig& config)
{
  const auto& grid = config.human_accel_grid;
  JointState next = human_successor(state, robot_u, Control{}, model.horizon);

  SuccessorFeatures features;
  features.velocity.resize(grid.size());
  features.gap.resize(grid.size());
  for (std::size_t a = 0; a < grid.size(); ++a)
  {
    std::tie(next.human.position, next.human.velocity) = hold(
      state.human.position, state.human.velocity, grid[a], model.horizon);
    features.velocity[a] = next.human.velocity;

    const auto leader = find_leader(next, VehicleId::human());
    if (!leader)
    {
      features.gap[a] = std::numeric_limits<double>::infinity();
      continue;
    }
    features.gap[a] = std::max(
      0.0, vehicle(next, *leader).position - next.human.position);
  }
  return features;
}

//==============================================================================
std::size_t best_response_index(const HumanUtilityModel& model, double target,
  const SuccessorFeatures& features, std::span<const std::size_t> order)
{
  std::size_t best = order.front();
  double best_utility = -std::numeric_limits<double>::infinity();
  for (const std::size_t a : order)
  {
    const double u = utility_from_features(
      model, target, features.velocity[a], features.gap[a]);
    if (u > best_utility)
    {
      best = a;
      best_utility = u;
    }
  }
  return best;
}

//==============================================================================
double softmax_probability(std::span<const double> utilities,
  std::size_t index, double beta)
{
  const double top = *std::max_element(utilities.begin(), utilities.end());
  double total = 0.0;
  for (const double u : utilities)
    total += std::exp(beta * (u - top));

  const double p = std::exp(beta * (utilities[index] - top)) / total;
  if (utilities.size() < 2)
    return p;

  // Keep the image inside the open interval (0, 1).
  return std::clamp(p, std::numeric_limits<double>::min(),
    std::nextafter(1.0, 0.0));
}

//==============================================================================
std::vector<std::size_t> tie_break_order(std::span<const double> grid)
{
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
    [&](std::size_t a, std::size_t b)
    {
      const double ma = std::abs(grid[a]);
      const double mb = std::abs(grid[b]);
      if (ma != mb)
        return ma < mb;
      return grid[a] < grid[b];
    });
  return order;
}

} // namespace detail

//==============================================================================
double human_utility(const JointState& state, const HumanUtilityModel& model,
  std::size_t phi_index)
{
  double gap = std::numeric_limits<double>::infinity();
  if (const auto leader = find_leader(state, VehicleId::human()))
  {
    gap = vehicle(state, *leader).position - state.human.position;
    if (!(gap > 0.0))
      throw NonPositiveGap("human is at or past its leader");
  }

  return detail::utility_from_features(
    model, model.grid.value(phi_index), state.human.velocity, gap);
}

//==============================================================================
std::size_t snap_to_grid(double acceleration, std::span<const double> grid)
{
  if (grid.empty())
    throw InvalidArgument("cannot snap to an empty grid");

  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
  {
    const double d = std::abs(grid[i] - acceleration);
    const double best_d = std::abs(grid[best] - acceleration);
    if (d < best_d || (d == best_d && std::abs(grid[i]) < std::abs(grid[best])))
      best = i;
  }
  return best;
}

//==============================================================================
std::vector<double> likelihood_vector(const JointState& state,
  const Control& robot_u, std::size_t human_accel_index,
  const HumanUtilityModel& model, const DynamicsConfig& config)
{
  if (human_accel_index >= config.human_accel_grid.size())
    throw IndexOutOfRange("human action index outside the human grid");

  const auto features = detail::successor_features(
    state, robot_u, model, config);

  const std::size_t actions = config.human_accel_grid.size();
  std::vector<double> utilities(actions);
  std::vector<double> likelihood(model.grid.size());
  for (std::size_t phi = 0; phi < likelihood.size(); ++phi)
  {
    const double target = model.grid.values()[phi];
    for (std::size_t a = 0; a < actions; ++a)
    {
      utilities[a] = detail::utility_from_features(
        model, target, features.velocity[a], features.gap[a]);
    }
    likelihood[phi] = detail::softmax_probability(
      utilities, human_accel_index, model.rationality_beta);
  }
  return likelihood;
}

//==============================================================================
double boltzmann_likelihood(const JointState& state, const Control& robot_u,
  const Control& human_u, std::size_t phi_index,
  const HumanUtilityModel& model, const DynamicsConfig& config)
{
  model.grid.value(phi_index);
  const auto& grid = config.human_accel_grid;
  const auto it = std::find(grid.begin(), grid.end(), human_u.acceleration);
  if (it == grid.end())
    throw InvalidArgument("human action is not a point of the human grid");

  const auto a = static_cast<std::size_t>(it - grid.begin());
  return likelihood_vector(state, robot_u, a, model, config)[phi_index - 1];
}

//==============================================================================
Belief bayes_update(const Belief& belief, std::span<const double> likelihood)
{
  if (likelihood.size() != belief.size())
    throw GridMismatch("likelihood and belief sizes differ");

  std::vector<double> weights(belief.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    weights[i] = belief[i] * likelihood[i];
  return normalize(weights);
}

//==============================================================================
Belief belief_update(const Belief& belief, const JointState& state,
  const Control& robot_u, const Control& observed_human_u,
  const HumanUtilityModel& model, const DynamicsConfig& config)
{
  if (belief.size() != model.grid.size())
    throw GridMismatch("belief does not match the hypothesis grid");

  const std::size_t a = snap_to_grid(
    observed_human_u.acceleration, config.human_accel_grid);
  return bayes_update(
    belief, likelihood_vector(state, robot_u, a, model, config));
}

//==============================================================================
double estimate_phi(const Belief& belief, const HypothesisGrid& grid,
  EstimateMode mode)
{
  if (belief.size() != grid.size())
    throw GridMismatch("belief does not match the hypothesis grid");

  if (mode == EstimateMode::MAP)
    return grid.values()[belief.argmax()];

  double mean = 0.0;
  for (std::size_t i = 0; i < belief.size(); ++i)
    mean += belief[i] * grid.values()[i];
  return mean;
}

} // namespace infoprobe

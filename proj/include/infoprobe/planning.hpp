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

#ifndef INFOPROBE__PLANNING_HPP
#define INFOPROBE__PLANNING_HPP

#include <infoprobe/dynamics.hpp>
#include <infoprobe/inference.hpp>
#include <infoprobe/model.hpp>

#include <functional>
#include <vector>

namespace infoprobe {

enum class PlanObjective { Probe, Influence };

struct PlannerConfig
{
  int horizon_steps = 5;
  double plan_dt = 1.0;
  /// Weight lambda of the robot's safety reward.
  double safety_weight = 0.5;
  /// Distance scale of the robot's safety reward, m.
  double safety_distance = 10.0;
  PlanObjective objective = PlanObjective::Probe;
  /// Robot accelerations the planner branches over. Empty means the full
  /// admissible robot grid of the dynamics configuration.
  std::vector<double> robot_actions;
  /// IDM constants of the background vehicles, used to propagate them inside
  /// rollouts. Empty means they coast.
  std::vector<IdmParams> background_idm;
  /// Maximum number of expanded tree nodes before HorizonTooLarge.
  std::size_t node_budget = 200000;

  void validate(const DynamicsConfig& dynamics) const;
};

struct PlanResult
{
  std::vector<Control> controls;
  /// Optimal objective: expected information gain plus weighted safety for a
  /// probe plan, accumulated robot reward plus weighted safety for influence.
  double value = 0.0;
  /// Objective contribution of each step along the returned sequence.
  std::vector<double> stage_values;
  /// Belief-weighted terminal JSD between the current and predicted beliefs
  /// along the returned sequence. Zero for influence plans.
  double expected_information = 0.0;
  std::size_t explored_nodes = 0;
};

/// Reward the robot collects at a successor state under an influence
/// objective, excluding the safety term.
using RobotReward = std::function<double(const JointState&)>;

/// The human's best grid response under hypothesis phi_index (1-based): the
/// argmax of r^H at human_successor(), with ties toward the smallest |a| and
/// then the lower value.
Control best_response(const JointState& state, const Control& robot_u,
  std::size_t phi_index, const HumanUtilityModel& model,
  const DynamicsConfig& config);

/// Same, for an arbitrary physical hypothesis value (an estimate).
Control best_response_to(const JointState& state, const Control& robot_u,
  double target, const HumanUtilityModel& model,
  const DynamicsConfig& config);

/// -sum over same-lane neighbours of the robot of (safety_distance / gap)^2,
/// each term capped at 100.
double robot_safety_reward(const JointState& state, double safety_distance);

/// Robot accelerations the planner branches over, in tie-break order
/// (smallest |a| first, then smaller value).
std::vector<double> planning_actions(const PlannerConfig& planner,
  const DynamicsConfig& config);

/// One rollout step of the planners: robot holds robot_u and the human holds
/// human_u for plan_dt while the background follows IDM.
JointState rollout_step(const JointState& state, const Control& robot_u,
  const Control& human_u, const PlannerConfig& planner,
  const DynamicsConfig& config);

/// Maximizes E_{phi ~ belief} JSD(belief, predicted belief) plus the weighted
/// safety reward over every robot action sequence of the horizon. Each
/// hypothesis rolls out its own branch in which the human plays its best
/// response and the predicted belief is updated with that response. Solved by
/// depth-first dynamic programming; the result is identical to exhaustive
/// enumeration. Throws HorizonTooLarge.
PlanResult probe_plan(const JointState& state, const Belief& belief,
  const HumanUtilityModel& model, const DynamicsConfig& config,
  const PlannerConfig& planner);

/// Maximizes the accumulated robot reward plus the weighted safety reward with
/// the human playing its best response to phi_hat. Throws HorizonTooLarge.
PlanResult influence_plan(const JointState& state, double phi_hat,
  const HumanUtilityModel& model, const DynamicsConfig& config,
  const PlannerConfig& planner, const RobotReward& reward);

} // namespace infoprobe

#endif // INFOPROBE__PLANNING_HPP

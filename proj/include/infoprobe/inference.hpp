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

#ifndef INFOPROBE__INFERENCE_HPP
#define INFOPROBE__INFERENCE_HPP

#include <infoprobe/dynamics.hpp>
#include <infoprobe/model.hpp>

#include <vector>

namespace infoprobe {

/// Utility model the robot attributes to the human, parameterized by the
/// hypothesis grid.
struct HumanUtilityModel
{
  HypothesisGrid grid = HypothesisGrid::desired_velocity();
  double w_speed = 1.0;
  double w_headway = 0.05;
  double w_safety = 1.0;
  double rationality_beta = 1.0;
  /// Distance scale of the safety penalty (d_min / gap)^2, m.
  double safety_distance = 2.0;
  /// Speed the human is assumed to hold under a headway hypothesis, m/s.
  double reference_velocity = 20.0;
  /// Headways beyond this are treated as this value (free road), m.
  double headway_cap = 400.0;
  /// Time over which the human is modelled to hold an action when it scores
  /// that action, s.
  double horizon = 5.0;

  void validate() const;
};

/// (safety_distance / gap)^2 capped at 10. Non-positive gaps get the cap.
double safety_penalty(double gap, double safety_distance);

/// r^H for hypothesis phi_index (1-based) evaluated at state, with the gap
/// measured to the human's same-lane leader. Throws NonPositiveGap when the
/// human is at or past its leader.
double human_utility(const JointState& state, const HumanUtilityModel& model,
  std::size_t phi_index);

/// The state the human model scores an action by: robot and human hold their
/// accelerations for the model horizon under exact constant-acceleration
/// kinematics (stopping at zero speed) while the background coasts.
JointState human_successor(const JointState& state, const Control& robot_u,
  const Control& human_u, double horizon);

/// Index of the human grid point nearest to acceleration, ties toward zero.
std::size_t snap_to_grid(double acceleration, std::span<const double> grid);

/// Boltzmann probability of human_u (which must be a point of the human grid)
/// under hypothesis phi_index: the softmax of beta * r^H over the successors of
/// every human grid action.
double boltzmann_likelihood(const JointState& state, const Control& robot_u,
  const Control& human_u, std::size_t phi_index,
  const HumanUtilityModel& model, const DynamicsConfig& config);

/// Likelihoods of the human choosing grid action human_accel_index under every
/// hypothesis, in index order.
std::vector<double> likelihood_vector(const JointState& state,
  const Control& robot_u, std::size_t human_accel_index,
  const HumanUtilityModel& model, const DynamicsConfig& config);

/// Bayesian update of belief after observing observed_human_u. The observed
/// acceleration is snapped to the human grid first.
Belief belief_update(const Belief& belief, const JointState& state,
  const Control& robot_u, const Control& observed_human_u,
  const HumanUtilityModel& model, const DynamicsConfig& config);

/// posterior(phi) proportional to belief(phi) * likelihood[phi].
Belief bayes_update(const Belief& belief, std::span<const double> likelihood);

enum class EstimateMode { MAP, Mean };

/// MAP picks the most likely grid value (lowest index on ties); Mean is the
/// belief-weighted average of grid values.
double estimate_phi(const Belief& belief, const HypothesisGrid& grid,
  EstimateMode mode);

} // namespace infoprobe

#endif // INFOPROBE__INFERENCE_HPP

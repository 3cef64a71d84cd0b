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

#ifndef INFOPROBE__DETAIL__HUMAN_RESPONSE_HPP
#define INFOPROBE__DETAIL__HUMAN_RESPONSE_HPP

#include <infoprobe/inference.hpp>

#include <vector>

namespace infoprobe {
namespace detail {

/// Human velocity and gap to its leader in human_successor() for every human
/// grid action. A collided successor reports a gap of zero.
struct SuccessorFeatures
{
  std::vector<double> velocity;
  std::vector<double> gap;
};

SuccessorFeatures successor_features(const JointState& state,
  const Control& robot_u, const HumanUtilityModel& model,
  const DynamicsConfig& config);

/// r^H for a hypothesis with physical value target at a successor with the
/// given features.
double utility_from_features(const HumanUtilityModel& model,
  double target, double velocity, double gap);

/// Index of the grid action maximizing r^H, scanning in order and keeping the
/// first strict maximum.
std::size_t best_response_index(const HumanUtilityModel& model, double target,
  const SuccessorFeatures& features, std::span<const std::size_t> order);

/// exp(beta * u[index]) / sum_j exp(beta * u[j]), evaluated with the maximum
/// subtracted.
double softmax_probability(std::span<const double> utilities,
  std::size_t index, double beta);

/// Human grid indices ordered by smallest |a| first, then smaller value.
std::vector<std::size_t> tie_break_order(std::span<const double> grid);

} // namespace detail
} // namespace infoprobe

#endif // INFOPROBE__DETAIL__HUMAN_RESPONSE_HPP

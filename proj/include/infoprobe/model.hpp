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

#ifndef INFOPROBE__MODEL_HPP
#define INFOPROBE__MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace infoprobe {

/// Lane indices on the two-lane road.
inline constexpr int kInnerLane = 0;
inline constexpr int kOuterLane = 1;

/// Lower bound applied to every belief entry after normalization.
inline constexpr double kBeliefFloor = 1e-12;

/// Longitudinal mass-point state of one vehicle.
struct VehicleState
{
  double position = 0.0;  // m
  double velocity = 0.0;  // m/s, never negative
  int lane = kOuterLane;

  bool operator==(const VehicleState&) const = default;
};

struct JointState
{
  VehicleState robot;
  VehicleState human;
  std::vector<VehicleState> background;
  double time = 0.0;

  bool operator==(const JointState&) const = default;
};

/// A longitudinal acceleration command with an optional lane change.
struct Control
{
  double acceleration = 0.0;
  std::optional<int> lane_change;

  bool operator==(const Control&) const = default;
};

enum class HypothesisKind
{
  DesiredVelocity,
  DesiredHeadway
};

//==============================================================================
/// Uniformly spaced, strictly increasing grid of hypothesis values. Indices are
/// 1-based to match the way hypotheses are reported.
class HypothesisGrid
{
public:
  /// Builds values[k] = first + step * k for k in [0, count).
  HypothesisGrid(HypothesisKind kind, double first, double step,
    std::size_t count);

  /// 30-point desired-velocity grid anchored at 19.86 m/s (index 16) and
  /// 23.56 m/s (index 19).
  static HypothesisGrid desired_velocity();

  /// 30-point desired-headway grid anchored at 48.27 m (index 4) and
  /// 108.62 m (index 9).
  static HypothesisGrid desired_headway();

  HypothesisKind kind() const { return _kind; }
  std::size_t size() const { return _values.size(); }
  double step() const { return _step; }
  std::span<const double> values() const { return _values; }

  /// Physical value of the 1-based hypothesis index.
  double value(std::size_t index) const;

private:
  HypothesisKind _kind;
  double _step;
  std::vector<double> _values;
};

//==============================================================================
/// Strictly positive probability vector over a hypothesis grid. The only ways
/// to obtain one are normalize() and uniform(), so every instance satisfies
/// min > 0 and |sum - 1| <= 1e-9.
class Belief
{
public:
  static Belief uniform(std::size_t size);

  std::size_t size() const { return _p.size(); }
  double operator[](std::size_t i) const { return _p[i]; }
  std::span<const double> probabilities() const { return _p; }

  /// 0-based index of the largest entry, ties toward the lower index.
  std::size_t argmax() const;

  bool operator==(const Belief&) const = default;

private:
  explicit Belief(std::vector<double> p) : _p(std::move(p)) {}
  friend Belief normalize(std::span<const double> raw_weights);

  std::vector<double> _p;
};

/// Scales nonnegative weights to sum to one, raises entries below kBeliefFloor
/// to the floor and renormalizes. Throws AllZeroWeights if no weight is > 0.
Belief normalize(std::span<const double> raw_weights);

/// Physical value of a 1-based hypothesis index. Throws IndexOutOfRange.
double grid_value(const HypothesisGrid& grid, std::size_t index);

} // namespace infoprobe

#endif // INFOPROBE__MODEL_HPP

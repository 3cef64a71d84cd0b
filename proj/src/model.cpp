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

#include <infoprobe/model.hpp>
#include <infoprobe/errors.hpp>

#include <algorithm>
#include <string>

namespace infoprobe {

//==============================================================================
HypothesisGrid::HypothesisGrid(
  HypothesisKind kind, double first, double step, std::size_t count)
: _kind(kind),
  _step(step)
{
  if (count == 0)
    throw InvalidArgument("hypothesis grid must be nonempty");
  if (!(step > 0.0))
    throw InvalidArgument("hypothesis grid step must be positive");

  _values.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    _values.push_back(first + step * static_cast<double>(k));
}

//==============================================================================
HypothesisGrid HypothesisGrid::desired_velocity()
{
  // Three steps separate index 16 (19.86) from index 19 (23.56).
  const double step = (23.56 - 19.86) / 3.0;
  return HypothesisGrid(HypothesisKind::DesiredVelocity,
    19.86 - 15.0 * step, step, 30);
}

//==============================================================================
HypothesisGrid HypothesisGrid::desired_headway()
{
  // Five steps separate index 4 (48.27) from index 9 (108.62).
  const double step = (108.62 - 48.27) / 5.0;
  return HypothesisGrid(HypothesisKind::DesiredHeadway,
    48.27 - 3.0 * step, step, 30);
}

//==============================================================================
double HypothesisGrid::value(std::size_t index) const
{
  if (index < 1 || index > _values.size())
  {
    throw IndexOutOfRange("hypothesis index " + std::to_string(index)
      + " outside [1, " + std::to_string(_values.size()) + "]");
  }
  return _values[index - 1];
}

//==============================================================================
double grid_value(const HypothesisGrid& grid, std::size_t index)
{
  return grid.value(index);
}

//==============================================================================
Belief Belief::uniform(std::size_t size)
{
  if (size == 0)
    throw InvalidArgument("belief must cover at least one hypothesis");
  return Belief(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

//==============================================================================
std::size_t Belief::argmax() const
{
  return static_cast<std::size_t>(
    std::max_element(_p.begin(), _p.end()) - _p.begin());
}

//==============================================================================
Belief normalize(std::span<const double> raw_weights)
{
  if (raw_weights.empty())
    throw InvalidArgument("cannot normalize an empty weight vector");

  double total = 0.0;
  for (const double w : raw_weights)
  {
    if (w > 0.0)
      total += w;
  }

  if (!(total > 0.0))
    throw AllZeroWeights("every weight is non-positive");

  std::vector<double> p(raw_weights.size());
  double floored_total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
  {
    const double w = raw_weights[i] > 0.0 ? raw_weights[i] : 0.0;
    p[i] = std::max(w / total, kBeliefFloor);
    floored_total += p[i];
  }

  for (double& x : p)
    x /= floored_total;

  return Belief(std::move(p));
}

} // namespace infoprobe

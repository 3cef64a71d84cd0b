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

#include <infoprobe/errors.hpp>
#include <infoprobe/model.hpp>

#include <gtest/gtest.h>

#include <vector>

using namespace infoprobe;

namespace {

std::vector<double> entries(const Belief& b)
{
  return {b.probabilities().begin(), b.probabilities().end()};
}

} // namespace

TEST(Normalize, EqualWeightsGiveUniform)
{
  const std::vector<double> w{2, 2, 2, 2};
  const Belief b = normalize(w);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_DOUBLE_EQ(b[i], 0.25);
}

TEST(Normalize, Proportional)
{
  const std::vector<double> w{1, 3};
  const Belief b = normalize(w);
  EXPECT_DOUBLE_EQ(b[0], 0.25);
  EXPECT_DOUBLE_EQ(b[1], 0.75);
}

TEST(Normalize, ZeroEntryIsFlooredThenRenormalized)
{
  // Scaled weights are (0, 1); the zero is raised to the floor and the pair
  // is divided by 1 + floor.
  const double floor = 1e-12;
  const double expected0 = floor / (1.0 + floor);
  const double expected1 = 1.0 / (1.0 + floor);

  const std::vector<double> w{0, 1};
  const Belief b = normalize(w);
  EXPECT_NEAR(b[0], expected0, 1e-24);
  EXPECT_NEAR(b[1], expected1, 1e-15);
  EXPECT_GT(b[0], 0.0);
}

TEST(Normalize, RejectsAllZeroWeights)
{
  EXPECT_THROW(normalize(std::vector<double>{0, 0, 0}), AllZeroWeights);
  EXPECT_THROW(normalize(std::vector<double>{-1, 0}), AllZeroWeights);
  EXPECT_THROW(normalize(std::vector<double>{}), InvalidArgument);
}

TEST(Normalize, IsIdempotent)
{
  const std::vector<double> w{0.3, 7.0, 1e-20, 0.0, 2.5};
  const Belief once = normalize(w);
  const Belief twice = normalize(entries(once));
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_NEAR(once[i], twice[i], 1e-15);
}

TEST(Belief, UniformAndArgmax)
{
  const Belief u = Belief::uniform(30);
  EXPECT_EQ(u.size(), 30u);
  EXPECT_DOUBLE_EQ(u[7], 1.0 / 30.0);
  EXPECT_EQ(u.argmax(), 0u);

  const Belief b = normalize(std::vector<double>{1, 4, 4, 2});
  EXPECT_EQ(b.argmax(), 1u);
  EXPECT_THROW(Belief::uniform(0), InvalidArgument);
}

TEST(HypothesisGrid, VelocityAnchors)
{
  const auto grid = HypothesisGrid::desired_velocity();
  EXPECT_EQ(grid.size(), 30u);
  EXPECT_EQ(grid.kind(), HypothesisKind::DesiredVelocity);
  EXPECT_NEAR(grid_value(grid, 16), 19.86, 1e-12);
  EXPECT_NEAR(grid_value(grid, 19), 23.56, 1e-12);
}

TEST(HypothesisGrid, HeadwayAnchors)
{
  const auto grid = HypothesisGrid::desired_headway();
  EXPECT_EQ(grid.size(), 30u);
  EXPECT_EQ(grid.kind(), HypothesisKind::DesiredHeadway);
  EXPECT_NEAR(grid_value(grid, 4), 48.27, 1e-12);
  EXPECT_NEAR(grid_value(grid, 9), 108.62, 1e-12);
}

TEST(HypothesisGrid, UniformlySpacedAndIncreasing)
{
  for (const auto& grid : {HypothesisGrid::desired_velocity(),
         HypothesisGrid::desired_headway()})
  {
    const auto v = grid.values();
    for (std::size_t i = 1; i < v.size(); ++i)
    {
      EXPECT_GT(v[i], v[i - 1]);
      EXPECT_NEAR(v[i] - v[i - 1], grid.step(), 1e-9);
    }
  }
}

TEST(HypothesisGrid, IndexIsOneBased)
{
  const HypothesisGrid grid(HypothesisKind::DesiredVelocity, 10.0, 1.0, 11);
  EXPECT_DOUBLE_EQ(grid_value(grid, 1), 10.0);
  EXPECT_DOUBLE_EQ(grid_value(grid, 11), 20.0);
  EXPECT_THROW(grid_value(grid, 0), IndexOutOfRange);
  EXPECT_THROW(grid_value(grid, 12), IndexOutOfRange);
}

TEST(HypothesisGrid, RejectsDegenerateGrids)
{
  EXPECT_THROW(HypothesisGrid(HypothesisKind::DesiredVelocity, 0.0, 1.0, 0),
    InvalidArgument);
  EXPECT_THROW(HypothesisGrid(HypothesisKind::DesiredVelocity, 0.0, 0.0, 3),
    InvalidArgument);
}

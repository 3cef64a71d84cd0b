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

#include <infoprobe/divergence.hpp>
#include <infoprobe/errors.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace infoprobe {

namespace {

void check_aligned(const Belief& a, const Belief& b)
{
  if (a.size() != b.size())
    throw GridMismatch("beliefs cover different hypothesis grids");
}

} // anonymous namespace

//==============================================================================
double kl_to_mixture_bound(const Belief& a, const Belief& b)
{
  check_aligned(a, b);
  double sup_a = 0.0;
  double inf_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    sup_a = std::max(sup_a, a[i]);
    inf_sum = std::min(inf_sum, a[i] + b[i]);
  }
  return std::log(2.0 * sup_a) - std::log(inf_sum);
}

//==============================================================================
double kl_to_mixture(const Belief& a, const Belief& b)
{
  check_aligned(a, b);

  double kl = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    kl += a[i] * std::log(2.0 * a[i] / (a[i] + b[i]));

  assert(kl <= kl_to_mixture_bound(a, b) + 1e-12);
  return kl;
}

//==============================================================================
double jsd(const Belief& a, const Belief& b)
{
  const double d = 0.5 * (kl_to_mixture(a, b) + kl_to_mixture(b, a));
  // Rounding can leave a few ulps below zero for identical inputs.
  return std::clamp(d, 0.0, std::log(2.0));
}

} // namespace infoprobe

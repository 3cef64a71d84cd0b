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

#ifndef INFOPROBE__DIVERGENCE_HPP
#define INFOPROBE__DIVERGENCE_HPP

#include <infoprobe/model.hpp>

namespace infoprobe {

/// KL divergence (nats) from a to the even mixture of a and b. Throws
/// GridMismatch when the beliefs have different sizes.
double kl_to_mixture(const Belief& a, const Belief& b);

/// Jensen-Shannon divergence in nats. Lies in [0, ln 2].
double jsd(const Belief& a, const Belief& b);

/// ln(2 sup a) - ln(inf (a + b)), the worst case of kl_to_mixture(a, b) over
/// any pair with these extremes.
double kl_to_mixture_bound(const Belief& a, const Belief& b);

} // namespace infoprobe

#endif // INFOPROBE__DIVERGENCE_HPP

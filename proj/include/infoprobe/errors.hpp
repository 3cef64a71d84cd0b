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

#ifndef INFOPROBE__ERRORS_HPP
#define INFOPROBE__ERRORS_HPP

#include <stdexcept>
#include <string>

namespace infoprobe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define INFOPROBE_DEFINE_ERROR(Name)                  \
  class Name : public Error                           \
  {                                                   \
  public:                                             \
    explicit Name(const std::string& what)            \
    : Error(std::string(#Name ": ") + what) {}        \
  }

/// Every normalization weight was non-positive (likelihood underflow).
INFOPROBE_DEFINE_ERROR(AllZeroWeights);
INFOPROBE_DEFINE_ERROR(IndexOutOfRange);
/// A follower is at or past its leader: the episode is in a collision state.
INFOPROBE_DEFINE_ERROR(NonPositiveGap);
INFOPROBE_DEFINE_ERROR(GridMismatch);
/// The planning tree exceeds the node budget; coarsen the action grid.
INFOPROBE_DEFINE_ERROR(HorizonTooLarge);
INFOPROBE_DEFINE_ERROR(CutoffNotMet);
INFOPROBE_DEFINE_ERROR(CollisionDetected);
INFOPROBE_DEFINE_ERROR(NoBackgroundVehicles);
INFOPROBE_DEFINE_ERROR(InvalidArgument);
INFOPROBE_DEFINE_ERROR(ConfigError);
INFOPROBE_DEFINE_ERROR(IoError);

#undef INFOPROBE_DEFINE_ERROR

} // namespace infoprobe

#endif // INFOPROBE__ERRORS_HPP

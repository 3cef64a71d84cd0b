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

#ifndef INFOPROBE__ARTIFACTS_HPP
#define INFOPROBE__ARTIFACTS_HPP

#include <infoprobe/scenario.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace infoprobe {

std::string_view version();

/// %.9g, with inf and -inf spelled out.
std::string format_number(double value);

/// One row per record: t, phase, robot_x, robot_v, robot_lane, robot_a,
/// human_x, human_v, human_lane, human_a, then bg{i}_x, bg{i}_v, bg{i}_a.
void write_timeseries(std::ostream& out, const RunLog& log);

/// One row per belief snapshot: t, then one probability column per
/// hypothesis.
void write_beliefs(std::ostream& out, const RunLog& log);

/// JSON document with the estimates, per-class metrics, phase boundaries,
/// objective starts and the effective configuration.
void write_summary(std::ostream& out, const RunLog& log,
  const ScenarioConfig& config);

struct RunArtifacts
{
  std::filesystem::path timeseries;
  std::filesystem::path beliefs;
  std::filesystem::path summary;
};

/// Writes timeseries.csv, beliefs.csv and summary.json into dir, creating it
/// if needed. On failure removes whatever it wrote and throws IoError.
RunArtifacts write_artifacts(const std::filesystem::path& dir,
  const RunLog& log, const ScenarioConfig& config);

} // namespace infoprobe

#endif // INFOPROBE__ARTIFACTS_HPP

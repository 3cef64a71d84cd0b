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

#include <infoprobe/artifacts.hpp>
#include <infoprobe/config.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#ifndef INFOPROBE_VERSION
#define INFOPROBE_VERSION "0.0.0"
#endif

namespace infoprobe {

namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& value)
{
  return value ? Json(*value) : Json(nullptr);
}

/// JSON has no infinities, so those become strings.
Json number_json(double value)
{
  if (std::isinf(value))
    return value > 0.0 ? "inf" : "-inf";
  return value;
}

Json config_json(const ScenarioConfig& config)
{
  Json out = Json::object();
  for (const auto& entry : config_entries(config))
  {
    Json value = std::visit([](const auto& v) -> Json
    {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, double>)
        return number_json(v);
      else if constexpr (std::is_same_v<T, std::vector<double>>)
      {
        Json list = Json::array();
        for (const double x : v)
          list.push_back(number_json(x));
        return list;
      }
      else
        return v;
    }, entry.value);
    out[entry.section][entry.key] = std::move(value);
  }
  return out;
}

constexpr VehicleClass kClasses[] = {
  VehicleClass::Robot, VehicleClass::Human, VehicleClass::Background};

void write_file(const std::filesystem::path& path,
  const std::function<void(std::ostream&)>& write)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot create " + path.string());
  write(out);
  out.close();
  if (!out)
  {
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw IoError("failed writing " + path.string());
  }
}

} // namespace

std::string_view version()
{
  return INFOPROBE_VERSION;
}

std::string format_number(double value)
{
  if (std::isinf(value))
    return value > 0.0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

//==============================================================================
void write_timeseries(std::ostream& out, const RunLog& log)
{
  const std::size_t n_background = log.records.empty()
    ? 0 : log.records.front().state.background.size();

  out << "t,phase,robot_x,robot_v,robot_lane,robot_a,"
         "human_x,human_v,human_lane,human_a";
  for (std::size_t i = 0; i < n_background; ++i)
    out << ",bg" << i << "_x,bg" << i << "_v,bg" << i << "_a";
  out << '\n';

  for (const auto& r : log.records)
  {
    const auto& s = r.state;
    out << format_number(s.time) << ',' << to_string(r.phase)
      << ',' << format_number(s.robot.position)
      << ',' << format_number(s.robot.velocity)
      << ',' << s.robot.lane
      << ',' << format_number(r.robot_u.acceleration)
      << ',' << format_number(s.human.position)
      << ',' << format_number(s.human.velocity)
      << ',' << s.human.lane
      << ',' << format_number(r.human_u.acceleration);
    for (std::size_t i = 0; i < n_background; ++i)
    {
      const double a = i < r.background_accels.size()
        ? r.background_accels[i] : 0.0;
      out << ',' << format_number(s.background[i].position)
        << ',' << format_number(s.background[i].velocity)
        << ',' << format_number(a);
    }
    out << '\n';
  }
}

void write_beliefs(std::ostream& out, const RunLog& log)
{
  const std::size_t n = log.snapshots.empty()
    ? log.final_belief.size() : log.snapshots.front().probabilities.size();
  out << 't';
  for (std::size_t i = 1; i <= n; ++i)
    out << ",p" << i;
  out << '\n';
  for (const auto& snapshot : log.snapshots)
  {
    out << format_number(snapshot.time);
    for (const double p : snapshot.probabilities)
      out << ',' << format_number(p);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunLog& log,
  const ScenarioConfig& config)
{
  const bool velocity = config.model.grid.kind()
    == HypothesisKind::DesiredVelocity;

  Json j;
  j["version"] = version();
  j["scenario"] = to_string(config.kind);
  j["mode"] = to_string(config.mode);
  j["dt"] = config.dynamics.dt;
  j["duration"] = config.duration;
  j["records"] = log.records.size();

  j["phi_hat"] = {
    {"quantity", velocity ? "desired_velocity" : "desired_headway"},
    {"unit", velocity ? "m/s" : "m"},
    {"map", log.phi_map},
    {"mean", log.phi_mean},
    {"influence", optional_number(log.phi_hat)}};

  j["events"] = {
    {"probe_termination", optional_number(log.probe_termination_time)},
    {"influence_start", optional_number(log.influence_start_time)},
    {"robot_lane_change", optional_number(log.robot_lane_change_time)},
    {"human_lane_change", optional_number(log.human_lane_change_time)}};

  Json phases = Json::array();
  for (const auto& p : log.phases)
    phases.push_back({{"time", p.time}, {"phase", to_string(p.phase)}});
  j["phases"] = std::move(phases);

  Json objectives = Json::array();
  for (const auto& o : log.objectives)
    objectives.push_back({{"time", o.time}, {"kind", to_string(o.kind)}});
  j["objectives"] = std::move(objectives);

  Json deviation = Json::object();
  Json control = Json::object();
  for (const VehicleClass cls : kClasses)
  {
    const auto series = metric_velocity_deviation(log, cls);
    Json d = {{"min", nullptr}, {"max", nullptr}, {"final", nullptr}};
    if (!series.empty())
    {
      const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
      d = {{"min", *lo}, {"max", *hi}, {"final", series.back()}};
    }
    deviation[to_string(cls)] = std::move(d);
    control[to_string(cls)] = metric_cumulative_abs_control(
      log, config.dynamics.dt, cls);
  }
  j["velocity_deviation"] = std::move(deviation);
  j["cumulative_abs_control"] = std::move(control);
  j["planner_calls"] = log.planner_calls;
  j["config"] = config_json(config);

  out << j.dump(2) << '\n';
}

//==============================================================================
RunArtifacts write_artifacts(const std::filesystem::path& dir,
  const RunLog& log, const ScenarioConfig& config)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());

  RunArtifacts paths{dir / "timeseries.csv", dir / "beliefs.csv",
    dir / "summary.json"};
  const std::pair<const std::filesystem::path*,
    std::function<void(std::ostream&)>> files[] = {
    {&paths.timeseries, [&](std::ostream& out) { write_timeseries(out, log); }},
    {&paths.beliefs, [&](std::ostream& out) { write_beliefs(out, log); }},
    {&paths.summary,
      [&](std::ostream& out) { write_summary(out, log, config); }}};

  std::vector<const std::filesystem::path*> written;
  try
  {
    for (const auto& [path, write] : files)
    {
      write_file(*path, write);
      written.push_back(path);
    }
  }
  catch (...)
  {
    for (const auto* path : written)
      std::filesystem::remove(*path, ec);
    throw;
  }
  return paths;
}

} // namespace infoprobe

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
#include <infoprobe/errors.hpp>

#include <json.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace infoprobe;
namespace fs = std::filesystem;

namespace {

class ScratchDir
{
public:
  ScratchDir()
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    _path = fs::temp_directory_path() / ("infoprobe-" + std::string(
      info->name()) + "-" + std::to_string(::getpid()));
    fs::remove_all(_path);
  }
  ~ScratchDir() { fs::remove_all(_path); }

  const fs::path& path() const { return _path; }

private:
  fs::path _path;
};

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
  {
    std::vector<std::string> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ','))
      row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

struct Run
{
  ScenarioConfig config;
  RunLog log;
};

const Run& short_passive_run()
{
  static const Run run = []
  {
    Run r{ScenarioConfig::lane_advise(RunMode::Passive), {}};
    r.config.duration = 20.0;
    r.log = run_scenario(r.config);
    return r;
  }();
  return run;
}

} // namespace

TEST(FormatNumber, NineSignificantDigits)
{
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(123456789.4), "123456789");
  EXPECT_EQ(format_number(2e-12), "2e-12");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Timeseries, ColumnOrder)
{
  const auto& run = short_passive_run();
  std::ostringstream out;
  write_timeseries(out, run.log);
  const auto rows = read_csv(out.str());
  ASSERT_EQ(rows.size(), run.log.records.size() + 1);

  std::vector<std::string> expected{"t", "phase", "robot_x", "robot_v",
    "robot_lane", "robot_a", "human_x", "human_v", "human_lane", "human_a"};
  for (std::size_t i = 0; i < run.config.background.size(); ++i)
  {
    for (const char* f : {"_x", "_v", "_a"})
      expected.push_back("bg" + std::to_string(i) + f);
  }
  EXPECT_EQ(rows.front(), expected);
  for (const auto& row : rows)
    EXPECT_EQ(row.size(), expected.size());
  EXPECT_EQ(rows[1][1], "observe");
}

TEST(Timeseries, NumbersRoundTripAtNineDigits)
{
  const auto& run = short_passive_run();
  std::ostringstream out;
  write_timeseries(out, run.log);
  const auto rows = read_csv(out.str());

  for (std::size_t k = 0; k < run.log.records.size(); ++k)
  {
    const auto& r = run.log.records[k];
    const auto& row = rows[k + 1];
    const double values[] = {r.state.time, r.state.robot.position,
      r.state.robot.velocity, r.robot_u.acceleration, r.state.human.position,
      r.state.human.velocity, r.human_u.acceleration};
    const std::size_t columns[] = {0, 2, 3, 5, 6, 7, 9};
    for (std::size_t i = 0; i < std::size(values); ++i)
    {
      const double parsed = std::strtod(row[columns[i]].c_str(), nullptr);
      // The parsed value is the 9-digit rounding of the original.
      EXPECT_LE(std::abs(parsed - values[i]),
        5e-9 * std::abs(values[i]) + 1e-300);
      EXPECT_EQ(format_number(parsed), row[columns[i]]);
    }
  }
}

TEST(Beliefs, RowsSumToOne)
{
  const auto& run = short_passive_run();
  std::ostringstream out;
  write_beliefs(out, run.log);
  const auto rows = read_csv(out.str());
  ASSERT_EQ(rows.size(), run.log.snapshots.size() + 1);
  ASSERT_EQ(rows.front().size(), 31u);
  EXPECT_EQ(rows.front()[0], "t");
  EXPECT_EQ(rows.front()[1], "p1");
  EXPECT_EQ(rows.front()[30], "p30");
  for (std::size_t k = 1; k < rows.size(); ++k)
  {
    double sum = 0.0;
    for (std::size_t i = 1; i < rows[k].size(); ++i)
    {
      const double p = std::strtod(rows[k][i].c_str(), nullptr);
      EXPECT_GT(p, 0.0);
      sum += p;
    }
    // %.9g keeps each value within a relative 5e-9.
    EXPECT_NEAR(sum, 1.0, 5e-9) << "row " << k;
  }
}

TEST(Summary, ContentsAndConfigEcho)
{
  const auto& run = short_passive_run();
  std::ostringstream out;
  write_summary(out, run.log, run.config);
  const auto j = nlohmann::json::parse(out.str());

  EXPECT_EQ(j["version"], std::string(version()));
  EXPECT_EQ(j["scenario"], "lane-advise");
  EXPECT_EQ(j["mode"], "passive");
  EXPECT_EQ(j["records"], run.log.records.size());
  EXPECT_EQ(j["phi_hat"]["map"].get<double>(), run.log.phi_map);
  EXPECT_EQ(j["phi_hat"]["mean"].get<double>(), run.log.phi_mean);
  EXPECT_TRUE(j["phi_hat"]["influence"].is_null());
  EXPECT_TRUE(j["events"]["influence_start"].is_null());
  for (const char* cls : {"robot", "human", "background"})
  {
    EXPECT_TRUE(j["velocity_deviation"][cls].contains("min"));
    EXPECT_TRUE(j["velocity_deviation"][cls].contains("max"));
    EXPECT_TRUE(j["cumulative_abs_control"][cls].is_number());
  }
  EXPECT_EQ(j["cumulative_abs_control"]["background"].get<double>(),
    metric_cumulative_abs_control(run.log, run.config.dynamics.dt,
      VehicleClass::Background));
  for (const auto& phase : j["phases"])
    EXPECT_EQ(phase["phase"], "observe");

  // Every effective parameter is echoed.
  for (const auto& entry : config_entries(run.config))
  {
    EXPECT_TRUE(j["config"].contains(entry.section)
      && j["config"][entry.section].contains(entry.key))
      << "[" << entry.section << "] " << entry.key;
  }
}

TEST(WriteArtifacts, CreatesFilesAndIsByteIdentical)
{
  ScratchDir scratch;
  const auto& run = short_passive_run();
  const auto a = write_artifacts(scratch.path() / "a", run.log, run.config);

  // A second, independent run with the same configuration.
  const RunLog again = run_scenario(run.config);
  const auto b = write_artifacts(scratch.path() / "b", again, run.config);

  for (const auto& [x, y] : {std::pair{a.timeseries, b.timeseries},
         std::pair{a.beliefs, b.beliefs}, std::pair{a.summary, b.summary}})
  {
    ASSERT_TRUE(fs::exists(x));
    EXPECT_FALSE(slurp(x).empty());
    EXPECT_EQ(slurp(x), slurp(y)) << x;
  }
}

TEST(WriteArtifacts, FailureRemovesWrittenFiles)
{
  ScratchDir scratch;
  const auto& run = short_passive_run();
  const fs::path dir = scratch.path() / "out";
  fs::create_directories(dir / "summary.json");

  EXPECT_THROW(write_artifacts(dir, run.log, run.config), IoError);
  EXPECT_FALSE(fs::exists(dir / "timeseries.csv"));
  EXPECT_FALSE(fs::exists(dir / "beliefs.csv"));
  EXPECT_TRUE(fs::is_directory(dir / "summary.json"));
}

TEST(WriteArtifacts, UncreatableDirectory)
{
  ScratchDir scratch;
  fs::create_directories(scratch.path());
  std::ofstream(scratch.path() / "file") << "x";
  const auto& run = short_passive_run();
  EXPECT_THROW(write_artifacts(scratch.path() / "file" / "out", run.log,
    run.config), IoError);
}

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

// Runs the reference episodes and checks P1-P10, one line per criterion.
// Exits nonzero if any criterion fails.

#include "oracle.hpp"
#include "properties.hpp"

#include <infoprobe/scenario.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace infoprobe;
using namespace infoprobe::reference;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* id, bool passed, const std::string& detail)
{
  std::printf("%s %s  %s\n", id, passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!passed)
    ++g_failures;
}

std::string fmt(const char* format, auto... args)
{
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

struct TimedRun
{
  ScenarioConfig config;
  RunLog log;
  double seconds = 0.0;
  std::string error;
};

TimedRun timed_run(ScenarioConfig config)
{
  TimedRun run{std::move(config), {}, 0.0, {}};
  const auto start = std::chrono::steady_clock::now();
  try
  {
    run.log = run_scenario(run.config);
  }
  catch (const Error& e)
  {
    run.error = e.what();
  }
  run.seconds = std::chrono::duration<double>(
    std::chrono::steady_clock::now() - start).count();
  return run;
}

/// MAP of the belief snapshot taken at time t, or NaN if there is none.
double map_at(const TimedRun& run, double t, std::size_t* index = nullptr)
{
  for (const auto& s : run.log.snapshots)
  {
    if (std::abs(s.time - t) < 1e-9)
    {
      std::size_t best = 0;
      for (std::size_t i = 1; i < s.probabilities.size(); ++i)
      {
        if (s.probabilities[i] > s.probabilities[best])
          best = i;
      }
      if (index)
        *index = best + 1;
      return run.config.model.grid.values()[best];
    }
  }
  return std::nan("");
}

double control(const TimedRun& run, VehicleClass cls)
{
  return metric_cumulative_abs_control(run.log, run.config.dynamics.dt, cls);
}

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

//==============================================================================
void scenario_one()
{
  const auto active = timed_run(ScenarioConfig::lane_advise(RunMode::Active));
  const auto passive = timed_run(
    ScenarioConfig::lane_advise(RunMode::Passive));

  {
    const double map = map_at(active, 50.0);
    const bool ok = active.error.empty() && std::abs(map - 23.56) <= 2.47
      && map > 21.5 && active.seconds <= 60.0;
    report("P1", ok, fmt("lane-advise active: MAP at 50 s = %.2f m/s "
      "(need |x - 23.56| <= 2.47 and > 21.5), episode %.1f s (<= 60) %s",
      map, active.seconds, active.error.c_str()));
  }

  {
    std::size_t index = 0;
    const double map = map_at(passive, 50.0, &index);
    const bool ok = passive.error.empty() && !std::isnan(map)
      && (index >= 15 && index <= 17);
    report("P2", ok, fmt("lane-advise passive: MAP at 50 s = %.2f m/s, "
      "index %zu (need 16 +/- 1, i.e. 19.86 +/- one step) %s", map, index,
      passive.error.c_str()));
  }

  {
    const auto& log = active.log;
    double pre = 0.0, post = 0.0;
    std::size_t n_pre = 0, n_post = 0;
    if (log.influence_start_time && log.human_lane_change_time)
    {
      for (const auto& r : log.records)
      {
        if (r.state.time < *log.influence_start_time)
        {
          pre += r.state.human.velocity;
          ++n_pre;
        }
        if (r.state.time >= *log.human_lane_change_time)
        {
          post += r.state.human.velocity;
          ++n_post;
        }
      }
    }
    const bool have = n_pre > 0 && n_post > 0;
    const double gain = have ? (post / n_post) / (pre / n_pre) - 1.0 : 0.0;
    report("P3", have && gain >= 0.15, have
      ? fmt("human mean velocity %.2f m/s before influence (t < %.1f s), "
        "%.2f m/s after its lane change (t >= %.1f s): +%.1f%% (need >= 15%%)",
        pre / n_pre, *log.influence_start_time, post / n_post,
        *log.human_lane_change_time, 100.0 * gain)
      : std::string("no influence phase or no human lane change"));
  }

  {
    const double bg = control(active, VehicleClass::Background);
    report("P4", active.error.empty() && bg <= 25.0,
      fmt("lane-advise active background cumulative |a| = %.2f m/s "
        "(need <= 25)", bg));
  }
}

//==============================================================================
void scenario_two(double& active_seconds)
{
  const auto active = timed_run(ScenarioConfig::gap_create(RunMode::Active));
  const auto passive = timed_run(ScenarioConfig::gap_create(RunMode::Passive));
  active_seconds = active.seconds;

  {
    const bool have = active.log.phi_hat && passive.log.phi_hat;
    const double a = have ? *active.log.phi_hat : std::nan("");
    const double p = have ? *passive.log.phi_hat : std::nan("");
    const double ta = active.log.probe_termination_time.value_or(-1.0);
    const double tp = passive.log.influence_start_time.value_or(-1.0);
    report("P5", have && active.error.empty() && passive.error.empty()
      && a <= 70.0 && p >= 90.0,
      fmt("gap-create MAP headway: active %.2f m at probe termination "
        "(t = %.1f s, need <= 70), passive %.2f m at t = %.1f s (need >= 90)",
        a, ta, p, tp));
  }

  {
    const VehicleClass classes[] = {VehicleClass::Robot, VehicleClass::Human,
      VehicleClass::Background};
    const double needed[] = {0.20, 0.05, 0.20};
    const char* names[] = {"robot", "human", "background"};
    bool ok = active.error.empty() && passive.error.empty();
    std::string detail = "gap-create cumulative |a| active vs passive:";
    for (std::size_t i = 0; i < 3; ++i)
    {
      const double a = control(active, classes[i]);
      const double p = control(passive, classes[i]);
      const double reduction = p > 0.0 ? 1.0 - a / p : 0.0;
      ok = ok && reduction >= needed[i];
      detail += fmt(" %s %.2f vs %.2f (-%.1f%%, need %.0f%%)%s", names[i], a,
        p, 100.0 * reduction, 100.0 * needed[i], i < 2 ? ";" : "");
    }
    report("P6", ok, detail + " " + active.error + passive.error);
  }
}

//==============================================================================
void planner_oracle()
{
  std::mt19937_64 rng(2026);
  std::size_t mismatches = 0;
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 50; ++i)
  {
    PlanningInstance p = random_instance(rng, 3, 3, 4);

    p.planner.objective = PlanObjective::Probe;
    const auto probe = probe_plan(p.state, p.belief, p.model, p.config,
      p.planner);
    const auto probe_oracle = exhaustive_probe(p.state, p.belief, p.model,
      p.config, p.planner);

    p.planner.objective = PlanObjective::Influence;
    const auto influence = influence_plan(p.state, p.phi_hat, p.model,
      p.config, p.planner, p.reward);
    const auto influence_oracle = exhaustive_influence(p.state, p.phi_hat,
      p.model, p.config, p.planner, p.reward);

    const double e1 = std::abs(probe.value - probe_oracle.value);
    const double e2 = std::abs(influence.value - influence_oracle.value);
    worst = std::max({worst, e1, e2});
    if (e1 > 1e-12 || e2 > 1e-12
      || controls_of(probe) != probe_oracle.controls
      || controls_of(influence) != influence_oracle.controls)
    {
      ++mismatches;
    }
  }
  const double seconds = std::chrono::duration<double>(
    std::chrono::steady_clock::now() - start).count();
  report("P7", mismatches == 0 && seconds <= 10.0,
    fmt("50 random instances x {probe, influence} vs exhaustive enumeration: "
      "%zu mismatches, worst value error %.2e (need <= 1e-12), %.2f s "
      "(need <= 10)", mismatches, worst, seconds));
}

void invariants()
{
  const auto checks = check_all_properties(8, 1000);
  bool ok = true;
  std::string detail;
  for (const auto& c : checks)
  {
    ok = ok && c.passed() && c.cases >= 1000;
    detail += fmt("%s%s %zu/%zu (worst %.1e)", detail.empty() ? "" : "; ",
      c.name.c_str(), c.cases - c.failures, c.cases, c.worst);
  }
  report("P8", ok, detail);
}

void determinism()
{
  const fs::path root = fs::temp_directory_path()
    / ("infoprobe-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string flags = " --scenario lane-advise --mode active "
    "--duration 60 --seed 7 --out ";
  bool ok = true;
  for (const char* name : {"a", "b"})
  {
    const std::string command = std::string(INFOPROBE_CLI) + flags
      + (root / name).string() + " > /dev/null";
    ok = ok && std::system(command.c_str()) == 0;
  }

  std::size_t identical = 0;
  for (const char* file : {"timeseries.csv", "beliefs.csv", "summary.json"})
  {
    const std::string a = slurp(root / "a" / file);
    if (ok && !a.empty() && a == slurp(root / "b" / file))
      ++identical;
  }
  fs::remove_all(root);
  report("P9", ok && identical == 3,
    fmt("two CLI invocations with identical flags: %zu of 3 artifact files "
      "byte-identical", identical));
}

} // namespace

int main()
{
  scenario_one();
  double gap_create_seconds = 0.0;
  scenario_two(gap_create_seconds);
  planner_oracle();
  invariants();
  determinism();

  // P10 times fresh active episodes of both scenarios at full duration.
  const auto lane = timed_run(ScenarioConfig::lane_advise(RunMode::Active));
  const double slowest = std::max(lane.seconds, gap_create_seconds);
  report("P10", lane.error.empty() && slowest <= 300.0
    && lane.config.duration <= 120.0,
    fmt("active episodes of 120 simulated s: lane-advise %.1f s, gap-create "
      "%.1f s (need <= 300 each)", lane.seconds, gap_create_seconds));

  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

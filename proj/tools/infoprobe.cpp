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

// Runs one episode and writes timeseries.csv, beliefs.csv and summary.json.
//
// Exit status: 0 on success, 1 on a usage or configuration error, 2 when the
// episode ends in a collision or the artifacts cannot be written.

#include <infoprobe/artifacts.hpp>
#include <infoprobe/config.hpp>
#include <infoprobe/scenario.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

using namespace infoprobe;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRunFailure = 2;

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Simulate a robot car that probes a human driver to infer its "
    "preferences, then uses the estimate to influence it."};
  app.set_version_flag("--version", std::string(version()));

  std::optional<std::string> scenario;
  std::optional<std::string> mode;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  bool print_config = false;

  app.add_option("--scenario", scenario, "Scenario to simulate")
    ->check(CLI::IsMember({"lane-advise", "gap-create"}));
  app.add_option("--mode", mode, "Probe actively or only observe")
    ->check(CLI::IsMember({"active", "passive"}));
  app.add_option("--config", config_path,
    "INI file overriding the built-in defaults")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir,
    "Output directory (default: runs/<scenario>-<mode>)");
  app.add_option("--duration", duration, "Simulated seconds");
  app.add_option("--seed", seed, "Random seed, recorded in the summary");
  app.add_flag("--print-config", print_config,
    "Print the effective configuration and exit");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::Success& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  ScenarioConfig config;
  try
  {
    std::optional<ConfigFile> file;
    if (config_path)
      file = ConfigFile::load(*config_path);

    std::optional<ScenarioKind> kind;
    std::optional<RunMode> run_mode;
    if (scenario)
      kind = parse_scenario_kind(*scenario);
    if (mode)
      run_mode = parse_run_mode(*mode);

    config = base_config(file ? &*file : nullptr, kind, run_mode);
    if (file)
      apply_config(*file, config);
    if (duration)
      config.duration = *duration;
    if (seed)
      config.rng_seed = *seed;

    if (!(config.duration >= config.dynamics.dt))
    {
      throw ConfigError("duration " + format_number(config.duration)
        + " s is shorter than one time step");
    }
    config.validate();
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (print_config)
  {
    std::cout << format_config(config_entries(config));
    return kOk;
  }

  RunLog log;
  try
  {
    log = run_scenario(config);
  }
  catch (const ScenarioCollision& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
  catch (const HorizonTooLarge& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  catch (const InvalidArgument& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string dir = out_dir.value_or(
    "runs/" + to_string(config.kind) + "-" + to_string(config.mode));
  try
  {
    write_artifacts(dir, log, config);
  }
  catch (const IoError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }

  const bool velocity = config.model.grid.kind()
    == HypothesisKind::DesiredVelocity;
  std::cout << "wrote " << dir << ": phi_hat MAP "
    << format_number(log.phi_map) << (velocity ? " m/s" : " m")
    << ", mean " << format_number(log.phi_mean)
    << (velocity ? " m/s" : " m") << '\n';
  return kOk;
}

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

#ifndef INFOPROBE__CONFIG_HPP
#define INFOPROBE__CONFIG_HPP

#include <infoprobe/scenario.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace infoprobe {

using ConfigValue = std::variant<bool, std::int64_t, double, std::string,
  std::vector<double>>;

struct ConfigEntry
{
  std::string section;
  std::string key;
  ConfigValue value;
};

/// An INI document with one section per module, e.g.
///
///   [scenario]
///   duration = 60
///   [model]
///   beta = 0.12
///
/// Lists are comma separated. Numbers accept inf.
class ConfigFile
{
public:
  struct Item
  {
    std::string section;
    std::string key;
    std::string value;
    /// 1-based line in the source, 0 if unknown.
    std::size_t line = 0;
  };

  /// Throws ConfigError with the source name and line on malformed input and
  /// duplicate keys, and on keys outside a section.
  static ConfigFile parse(std::istream& in, const std::string& source);
  static ConfigFile load(const std::filesystem::path& path);

  const std::string& source() const { return _source; }
  const std::vector<Item>& items() const { return _items; }
  const Item* find(std::string_view section, std::string_view key) const;

private:
  std::string _source;
  std::vector<Item> _items;
};

ScenarioKind parse_scenario_kind(std::string_view text);
RunMode parse_run_mode(std::string_view text);

/// Defaults for the kind and mode, with kind and mode taken from the file's
/// [scenario] section unless given.
ScenarioConfig base_config(const ConfigFile* file,
  std::optional<ScenarioKind> kind, std::optional<RunMode> mode);

/// Overwrites config with every key of file. Throws ConfigError naming the
/// section and key on unknown keys and malformed values.
void apply_config(const ConfigFile& file, ScenarioConfig& config);

/// Every parameter of config that affects a run, in a fixed order. Applying
/// these entries to the defaults of the same kind and mode reproduces config.
std::vector<ConfigEntry> config_entries(const ScenarioConfig& config);

/// INI text of entries that parses back to the same values.
std::string format_config(const std::vector<ConfigEntry>& entries);

} // namespace infoprobe

#endif // INFOPROBE__CONFIG_HPP

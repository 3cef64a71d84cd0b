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

#include <infoprobe/config.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>

namespace infoprobe {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Thrown by the value parsers; apply_config adds the key.
struct BadValue
{
  std::string what;
};

double parse_double(std::string_view text)
{
  text = trim(text);
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || std::isnan(value))
    throw BadValue{"expected a number, got '" + std::string(text) + "'"};
  return value;
}

std::int64_t parse_int(std::string_view text)
{
  text = trim(text);
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw BadValue{"expected an integer, got '" + std::string(text) + "'"};
  return value;
}

std::uint64_t parse_unsigned(std::string_view text)
{
  text = trim(text);
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
  {
    throw BadValue{
      "expected a nonnegative integer, got '" + std::string(text) + "'"};
  }
  return value;
}

bool parse_bool(std::string_view text)
{
  text = trim(text);
  if (text == "true")
    return true;
  if (text == "false")
    return false;
  throw BadValue{"expected true or false, got '" + std::string(text) + "'"};
}

std::vector<double> parse_list(std::string_view text)
{
  std::vector<double> values;
  text = trim(text);
  if (text.empty())
    return values;
  while (true)
  {
    const auto comma = text.find(',');
    values.push_back(parse_double(text.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

std::string format_double(double value)
{
  if (std::isinf(value))
    return value > 0.0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string format_value(const ConfigValue& value)
{
  struct Visitor
  {
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const std::vector<double>& v) const
    {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + format_double(v[i]);
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

HypothesisKind parse_grid_kind(std::string_view text)
{
  text = trim(text);
  if (text == "velocity")
    return HypothesisKind::DesiredVelocity;
  if (text == "headway")
    return HypothesisKind::DesiredHeadway;
  throw BadValue{"expected velocity or headway, got '" + std::string(text)
    + "'"};
}

//==============================================================================
struct Field
{
  std::string section;
  std::string key;
  std::function<ConfigValue(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, std::string_view)> set;
};

/// Binds a double member reached through ref, which must accept both a const
/// and a mutable ScenarioConfig.
template <class Ref>
Field number(std::string section, std::string key, Ref ref)
{
  return {std::move(section), std::move(key),
    [ref](const ScenarioConfig& c) -> ConfigValue { return ref(c); },
    [ref](ScenarioConfig& c, std::string_view t) { ref(c) = parse_double(t); }};
}

template <class Ref>
Field integer(std::string section, std::string key, Ref ref)
{
  return {std::move(section), std::move(key),
    [ref](const ScenarioConfig& c) -> ConfigValue
    { return static_cast<std::int64_t>(ref(c)); },
    [ref](ScenarioConfig& c, std::string_view t)
    {
      using T = std::remove_reference_t<decltype(ref(c))>;
      const auto v = parse_int(t);
      if (v < 0 && std::is_unsigned_v<T>)
        throw BadValue{"expected a nonnegative integer"};
      ref(c) = static_cast<T>(v);
    }};
}

template <class Ref>
Field list(std::string section, std::string key, Ref ref)
{
  return {std::move(section), std::move(key),
    [ref](const ScenarioConfig& c) -> ConfigValue { return ref(c); },
    [ref](ScenarioConfig& c, std::string_view t) { ref(c) = parse_list(t); }};
}

void add_vehicle(std::vector<Field>& fields, const std::string& section,
  VehicleState ScenarioConfig::*member)
{
  fields.push_back(number(section, "position",
    [member](auto& c) -> auto& { return (c.*member).position; }));
  fields.push_back(number(section, "velocity",
    [member](auto& c) -> auto& { return (c.*member).velocity; }));
  fields.push_back({section, "lane",
    [member](const ScenarioConfig& c) -> ConfigValue
    { return static_cast<std::int64_t>((c.*member).lane); },
    [member](ScenarioConfig& c, std::string_view t)
    {
      const auto lane = parse_int(t);
      if (lane != kInnerLane && lane != kOuterLane)
        throw BadValue{"lanes must be 0 (inner) or 1 (outer)"};
      (c.*member).lane = static_cast<int>(lane);
    }});
}

void add_idm(std::vector<Field>& fields, const std::string& section,
  IdmParams ScenarioConfig::*member)
{
  fields.push_back(number(section, "u_max",
    [member](auto& c) -> auto& { return (c.*member).u_max; }));
  fields.push_back(number(section, "b_pref",
    [member](auto& c) -> auto& { return (c.*member).b_pref; }));
  fields.push_back(number(section, "v_des",
    [member](auto& c) -> auto& { return (c.*member).v_des; }));
  fields.push_back(number(section, "tau_gap",
    [member](auto& c) -> auto& { return (c.*member).tau_gap; }));
  fields.push_back(number(section, "d_min",
    [member](auto& c) -> auto& { return (c.*member).d_min; }));
}

/// One background attribute as a list over the vehicles. A single value is
/// broadcast; otherwise the length must match the vehicle count.
template <class Get>
Field background_list(std::string key, Get get)
{
  return {"background", key,
    [get](const ScenarioConfig& c) -> ConfigValue
    {
      std::vector<double> values;
      for (const auto& b : c.background)
        values.push_back(get(b));
      return values;
    },
    [get, key](ScenarioConfig& c, std::string_view t)
    {
      const auto values = parse_list(t);
      if (values.size() != 1 && values.size() != c.background.size())
      {
        throw BadValue{"expected 1 or " + std::to_string(c.background.size())
          + " values (one per background position), got "
          + std::to_string(values.size())};
      }
      for (std::size_t i = 0; i < c.background.size(); ++i)
        get(c.background[i]) = values[values.size() == 1 ? 0 : i];
    }};
}

void rebuild_grid(ScenarioConfig& c, std::optional<HypothesisKind> kind,
  std::optional<double> first, std::optional<double> step,
  std::optional<std::int64_t> count)
{
  const HypothesisGrid& g = c.model.grid;
  if (count && *count < 1)
    throw BadValue{"grid_count must be positive"};
  c.model.grid = HypothesisGrid(kind.value_or(g.kind()),
    first.value_or(g.values()[0]), step.value_or(g.step()),
    count ? static_cast<std::size_t>(*count) : g.size());
}

const std::vector<Field>& fields()
{
  static const std::vector<Field> table = []
  {
    std::vector<Field> f;
    const std::string s = "scenario";
    f.push_back({s, "kind",
      [](const ScenarioConfig& c) -> ConfigValue { return to_string(c.kind); },
      // Consumed by base_config.
      [](ScenarioConfig&, std::string_view t)
      {
        try { parse_scenario_kind(trim(t)); }
        catch (const ConfigError& e) { throw BadValue{e.what()}; }
      }});
    f.push_back({s, "mode",
      [](const ScenarioConfig& c) -> ConfigValue { return to_string(c.mode); },
      [](ScenarioConfig&, std::string_view t)
      {
        try { parse_run_mode(trim(t)); }
        catch (const ConfigError& e) { throw BadValue{e.what()}; }
      }});
    f.push_back(number(s, "duration",
      [](auto& c) -> auto& { return c.duration; }));
    f.push_back({s, "seed",
      [](const ScenarioConfig& c) -> ConfigValue
      { return static_cast<std::int64_t>(c.rng_seed); },
      [](ScenarioConfig& c, std::string_view t)
      { c.rng_seed = parse_unsigned(t); }});
    f.push_back(number(s, "cutoff_velocity",
      [](auto& c) -> auto& { return c.cutoff_velocity; }));
    f.push_back(number(s, "window",
      [](auto& c) -> auto& { return c.window; }));
    f.push_back(number(s, "termination_threshold",
      [](auto& c) -> auto& { return c.termination_threshold; }));
    f.push_back(number(s, "snapshot_interval",
      [](auto& c) -> auto& { return c.snapshot_interval; }));
    f.push_back(number(s, "observation_interval",
      [](auto& c) -> auto& { return c.observation_interval; }));
    f.push_back(number(s, "probe_speed_limit",
      [](auto& c) -> auto& { return c.probe_speed_limit; }));
    f.push_back({s, "passive_influence_time",
      [](const ScenarioConfig& c) -> ConfigValue
      {
        if (!c.passive_influence_time)
          return std::string("none");
        return *c.passive_influence_time;
      },
      [](ScenarioConfig& c, std::string_view t)
      {
        if (trim(t) == "none")
          c.passive_influence_time.reset();
        else
          c.passive_influence_time = parse_double(t);
      }});
    f.push_back({s, "record_all_beliefs",
      [](const ScenarioConfig& c) -> ConfigValue
      { return c.record_all_beliefs; },
      [](ScenarioConfig& c, std::string_view t)
      { c.record_all_beliefs = parse_bool(t); }});
    f.push_back(number(s, "lane_end",
      [](auto& c) -> auto& { return c.lane_end; }));

    add_vehicle(f, "robot", &ScenarioConfig::robot_initial);
    add_vehicle(f, "human", &ScenarioConfig::human_initial);
    add_idm(f, "human_idm", &ScenarioConfig::idm);
    add_idm(f, "robot_idm", &ScenarioConfig::robot_idm);

    // positions first: it sets the vehicle count the other lists follow.
    f.push_back({"background", "positions",
      [](const ScenarioConfig& c) -> ConfigValue
      {
        std::vector<double> values;
        for (const auto& b : c.background)
          values.push_back(b.initial.position);
        return values;
      },
      [](ScenarioConfig& c, std::string_view t)
      {
        const auto values = parse_list(t);
        BackgroundVehicle fill{{0.0, 20.0, kInnerLane}, IdmParams{}};
        if (!c.background.empty())
          fill = c.background.back();
        c.background.resize(values.size(), fill);
        for (std::size_t i = 0; i < values.size(); ++i)
          c.background[i].initial.position = values[i];
      }});
    f.push_back(background_list("velocities",
      [](auto& b) -> auto& { return b.initial.velocity; }));
    f.push_back({"background", "lanes",
      [](const ScenarioConfig& c) -> ConfigValue
      {
        std::vector<double> values;
        for (const auto& b : c.background)
          values.push_back(b.initial.lane);
        return values;
      },
      [](ScenarioConfig& c, std::string_view t)
      {
        const auto values = parse_list(t);
        if (values.size() != 1 && values.size() != c.background.size())
          throw BadValue{"expected 1 value or one per background position"};
        for (std::size_t i = 0; i < c.background.size(); ++i)
        {
          const double lane = values[values.size() == 1 ? 0 : i];
          if (lane != kInnerLane && lane != kOuterLane)
            throw BadValue{"lanes must be 0 (inner) or 1 (outer)"};
          c.background[i].initial.lane = static_cast<int>(lane);
        }
      }});
    f.push_back(background_list("u_max",
      [](auto& b) -> auto& { return b.idm.u_max; }));
    f.push_back(background_list("b_pref",
      [](auto& b) -> auto& { return b.idm.b_pref; }));
    f.push_back(background_list("v_des",
      [](auto& b) -> auto& { return b.idm.v_des; }));
    f.push_back(background_list("tau_gap",
      [](auto& b) -> auto& { return b.idm.tau_gap; }));
    f.push_back(background_list("d_min",
      [](auto& b) -> auto& { return b.idm.d_min; }));

    const std::string d = "dynamics";
    f.push_back(number(d, "dt", [](auto& c) -> auto& { return c.dynamics.dt; }));
    f.push_back(number(d, "robot_accel_min",
      [](auto& c) -> auto& { return c.dynamics.robot_accel_min; }));
    f.push_back(number(d, "robot_accel_max",
      [](auto& c) -> auto& { return c.dynamics.robot_accel_max; }));
    f.push_back(list(d, "robot_accel_grid",
      [](auto& c) -> auto& { return c.dynamics.robot_accel_grid; }));
    f.push_back(list(d, "human_accel_grid",
      [](auto& c) -> auto& { return c.dynamics.human_accel_grid; }));
    f.push_back(number(d, "robot_speed_limit",
      [](auto& c) -> auto& { return c.dynamics.robot_speed_limit; }));

    const std::string m = "model";
    f.push_back({m, "grid",
      [](const ScenarioConfig& c) -> ConfigValue
      {
        return std::string(c.model.grid.kind() == HypothesisKind::DesiredVelocity
          ? "velocity" : "headway");
      },
      [](ScenarioConfig& c, std::string_view t)
      { rebuild_grid(c, parse_grid_kind(t), {}, {}, {}); }});
    f.push_back({m, "grid_first",
      [](const ScenarioConfig& c) -> ConfigValue
      { return c.model.grid.values()[0]; },
      [](ScenarioConfig& c, std::string_view t)
      { rebuild_grid(c, {}, parse_double(t), {}, {}); }});
    f.push_back({m, "grid_step",
      [](const ScenarioConfig& c) -> ConfigValue { return c.model.grid.step(); },
      [](ScenarioConfig& c, std::string_view t)
      { rebuild_grid(c, {}, {}, parse_double(t), {}); }});
    f.push_back({m, "grid_count",
      [](const ScenarioConfig& c) -> ConfigValue
      { return static_cast<std::int64_t>(c.model.grid.size()); },
      [](ScenarioConfig& c, std::string_view t)
      { rebuild_grid(c, {}, {}, {}, parse_int(t)); }});
    f.push_back(number(m, "w_speed",
      [](auto& c) -> auto& { return c.model.w_speed; }));
    f.push_back(number(m, "w_headway",
      [](auto& c) -> auto& { return c.model.w_headway; }));
    f.push_back(number(m, "w_safety",
      [](auto& c) -> auto& { return c.model.w_safety; }));
    f.push_back(number(m, "beta",
      [](auto& c) -> auto& { return c.model.rationality_beta; }));
    f.push_back(number(m, "safety_distance",
      [](auto& c) -> auto& { return c.model.safety_distance; }));
    f.push_back(number(m, "reference_velocity",
      [](auto& c) -> auto& { return c.model.reference_velocity; }));
    f.push_back(number(m, "headway_cap",
      [](auto& c) -> auto& { return c.model.headway_cap; }));
    f.push_back(number(m, "horizon",
      [](auto& c) -> auto& { return c.model.horizon; }));

    const std::string p = "planner";
    f.push_back(integer(p, "horizon_steps",
      [](auto& c) -> auto& { return c.planner.horizon_steps; }));
    f.push_back(number(p, "plan_dt",
      [](auto& c) -> auto& { return c.planner.plan_dt; }));
    f.push_back(number(p, "safety_weight",
      [](auto& c) -> auto& { return c.planner.safety_weight; }));
    f.push_back(number(p, "safety_distance",
      [](auto& c) -> auto& { return c.planner.safety_distance; }));
    f.push_back(list(p, "robot_actions",
      [](auto& c) -> auto& { return c.planner.robot_actions; }));
    f.push_back(integer(p, "node_budget",
      [](auto& c) -> auto& { return c.planner.node_budget; }));

    const std::string i = "influence";
    f.push_back(number(i, "position_weight",
      [](auto& c) -> auto& { return c.influence.position_weight; }));
    f.push_back(number(i, "velocity_weight",
      [](auto& c) -> auto& { return c.influence.velocity_weight; }));
    f.push_back(number(i, "block_margin",
      [](auto& c) -> auto& { return c.influence.block_margin; }));
    f.push_back(number(i, "align_offset",
      [](auto& c) -> auto& { return c.influence.align_offset; }));
    f.push_back(number(i, "block_headway",
      [](auto& c) -> auto& { return c.influence.block_headway; }));
    f.push_back(number(i, "tracking_gain",
      [](auto& c) -> auto& { return c.influence.tracking_gain; }));
    return f;
  }();
  return table;
}

} // namespace

//==============================================================================
ConfigFile ConfigFile::parse(std::istream& in, const std::string& source)
{
  namespace pt = boost::property_tree;
  const std::string text(std::istreambuf_iterator<char>(in), {});
  pt::ptree tree;
  try
  {
    std::istringstream stream(text);
    pt::read_ini(stream, tree);
  }
  catch (const pt::ini_parser_error& e)
  {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": "
      + e.message());
  }

  // read_ini keeps no positions, so find each key's line separately.
  std::map<std::pair<std::string, std::string>, std::size_t> lines;
  {
    std::istringstream stream(text);
    std::string line;
    std::string section;
    for (std::size_t number = 1; std::getline(stream, line); ++number)
    {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == ';'
        || line[first] == '#')
      {
        continue;
      }
      if (line[first] == '[')
      {
        const auto close = line.find(']', first);
        section = std::string(trim(line.substr(first + 1, close - first - 1)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq != std::string::npos)
        lines.try_emplace({section, std::string(trim(line.substr(0, eq)))},
          number);
    }
  }

  ConfigFile file;
  file._source = source;
  for (const auto& [section, body] : tree)
  {
    // ptree cannot tell an empty section from a top-level key with an empty
    // value; only a top-level key with a value is reported.
    if (body.empty() && !body.data().empty())
    {
      const auto it = lines.find({"", section});
      throw ConfigError(source + ":"
        + (it == lines.end() ? std::string("?") : std::to_string(it->second))
        + ": key '" + section + "' is outside any [section]");
    }
    for (const auto& [key, value] : body)
    {
      const auto it = lines.find({section, key});
      file._items.push_back({section, key, value.data(),
        it == lines.end() ? 0 : it->second});
    }
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

const ConfigFile::Item* ConfigFile::find(std::string_view section,
  std::string_view key) const
{
  for (const auto& item : _items)
  {
    if (item.section == section && item.key == key)
      return &item;
  }
  return nullptr;
}

//==============================================================================
ScenarioKind parse_scenario_kind(std::string_view text)
{
  if (text == "lane-advise")
    return ScenarioKind::LaneAdvise;
  if (text == "gap-create")
    return ScenarioKind::GapCreate;
  throw ConfigError("unknown scenario '" + std::string(text)
    + "' (expected lane-advise or gap-create)");
}

RunMode parse_run_mode(std::string_view text)
{
  if (text == "active")
    return RunMode::Active;
  if (text == "passive")
    return RunMode::Passive;
  throw ConfigError("unknown mode '" + std::string(text)
    + "' (expected active or passive)");
}

ScenarioConfig base_config(const ConfigFile* file,
  std::optional<ScenarioKind> kind, std::optional<RunMode> mode)
{
  if (file)
  {
    if (!kind)
    {
      if (const auto* item = file->find("scenario", "kind"))
        kind = parse_scenario_kind(trim(item->value));
    }
    if (!mode)
    {
      if (const auto* item = file->find("scenario", "mode"))
        mode = parse_run_mode(trim(item->value));
    }
  }
  const RunMode m = mode.value_or(RunMode::Active);
  return kind.value_or(ScenarioKind::LaneAdvise) == ScenarioKind::LaneAdvise
    ? ScenarioConfig::lane_advise(m) : ScenarioConfig::gap_create(m);
}

void apply_config(const ConfigFile& file, ScenarioConfig& config)
{
  // The background count comes from positions, so it goes first.
  std::vector<ConfigFile::Item> items = file.items();
  std::stable_partition(items.begin(), items.end(), [](const auto& item)
    { return item.section == "background" && item.key == "positions"; });
  for (const auto& item : items)
  {
    const Field* field = nullptr;
    for (const auto& f : fields())
    {
      if (f.section == item.section && f.key == item.key)
      {
        field = &f;
        break;
      }
    }
    const std::string where = file.source()
      + (item.line ? ":" + std::to_string(item.line) : std::string())
      + ": [" + item.section + "] " + item.key;
    if (!field)
      throw ConfigError(where + ": unknown key");
    try
    {
      field->set(config, item.value);
    }
    catch (const BadValue& e)
    {
      throw ConfigError(where + ": " + e.what);
    }
    catch (const Error& e)
    {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

std::vector<ConfigEntry> config_entries(const ScenarioConfig& config)
{
  std::vector<ConfigEntry> entries;
  for (const auto& f : fields())
    entries.push_back({f.section, f.key, f.get(config)});
  return entries;
}

std::string format_config(const std::vector<ConfigEntry>& entries)
{
  std::ostringstream out;
  std::string section;
  for (const auto& e : entries)
  {
    if (e.section != section)
    {
      out << (section.empty() ? "" : "\n") << '[' << e.section << "]\n";
      section = e.section;
    }
    out << e.key << " = " << format_value(e.value) << '\n';
  }
  return out.str();
}

} // namespace infoprobe

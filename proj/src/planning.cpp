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

#include <infoprobe/planning.hpp>
#include <infoprobe/detail/human_response.hpp>
#include <infoprobe/divergence.hpp>
#include <infoprobe/errors.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

namespace infoprobe {

//==============================================================================
void PlannerConfig::validate(const DynamicsConfig& dynamics) const
{
  if (horizon_steps < 1)
    throw InvalidArgument("planning horizon must be at least one step");
  if (plan_dt < dynamics.dt)
    throw InvalidArgument("plan_dt must not be shorter than the dynamics dt");
  if (safety_weight < 0.0 || !(safety_distance > 0.0))
    throw InvalidArgument("safety weight must be >= 0, distance > 0");

  for (const double a : robot_actions)
  {
    if (a < dynamics.robot_accel_min || a > dynamics.robot_accel_max)
      throw InvalidArgument("planning action outside the robot bounds");
  }
}

//==============================================================================
std::vector<double> planning_actions(const PlannerConfig& planner,
  const DynamicsConfig& config)
{
  const std::vector<double>& grid = planner.robot_actions.empty()
    ? config.robot_accel_grid : planner.robot_actions;
  if (grid.empty())
    throw InvalidArgument("no robot actions to plan over");

  std::vector<double> ordered;
  for (const std::size_t i : detail::tie_break_order(grid))
    ordered.push_back(grid[i]);
  return ordered;
}

//==============================================================================
Control best_response_to(const JointState& state, const Control& robot_u,
  double target, const HumanUtilityModel& model,
  const DynamicsConfig& config)
{
  const auto features = detail::successor_features(
    state, robot_u, model, config);
  const auto order = detail::tie_break_order(config.human_accel_grid);
  const std::size_t a = detail::best_response_index(
    model, target, features, order);
  return Control{config.human_accel_grid[a], std::nullopt};
}

//==============================================================================
Control best_response(const JointState& state, const Control& robot_u,
  std::size_t phi_index, const HumanUtilityModel& model,
  const DynamicsConfig& config)
{
  return best_response_to(state, robot_u, model.grid.value(phi_index), model,
    config);
}

//==============================================================================
double robot_safety_reward(const JointState& state, double safety_distance)
{
  constexpr double cap = 100.0;
  double reward = 0.0;
  const auto add = [&](const VehicleState& other)
    {
      if (other.lane != state.robot.lane)
        return;
      const double gap = std::abs(other.position - state.robot.position);
      const double ratio = gap > 0.0 ? safety_distance / gap : 0.0;
      reward -= gap > 0.0 ? std::min(ratio * ratio, cap) : cap;
    };

  add(state.human);
  for (const auto& b : state.background)
    add(b);
  return reward;
}

namespace {

/// Background IDM inside hypothetical rollouts, where an overlap saturates at
/// hard braking instead of raising.
std::vector<double> rollout_background_accels(const JointState& state,
  const std::vector<IdmParams>& params)
{
  std::vector<double> accels(state.background.size(), 0.0);
  if (params.empty())
    return accels;

  for (std::size_t i = 0; i < accels.size(); ++i)
  {
    const auto leader = find_leader(state, VehicleId::background(i));
    if (!leader)
    {
      accels[i] = idm_accel(state.background[i], std::nullopt, params[i]);
      continue;
    }

    const VehicleState& lead = vehicle(state, *leader);
    const double gap = lead.position - state.background[i].position;
    accels[i] = gap > 0.0
      ? idm_accel(state.background[i].velocity, gap, lead.velocity, params[i])
      : -kHardBraking;
  }
  return accels;
}

} // anonymous namespace

//==============================================================================
JointState rollout_step(const JointState& state, const Control& robot_u,
  const Control& human_u, const PlannerConfig& planner,
  const DynamicsConfig& config)
{
  if (!planner.background_idm.empty()
    && planner.background_idm.size() != state.background.size())
  {
    throw InvalidArgument("expected one IDM parameter set per background car");
  }

  const auto accels = rollout_background_accels(state, planner.background_idm);
  return joint_step(state, robot_u, human_u, accels, config, planner.plan_dt);
}

namespace {

//==============================================================================
// Memoization support. Keys compare exactly; only the hash quantizes.

std::size_t hash_combine(std::size_t seed, std::size_t v)
{
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t quantized(double x, double quantum)
{
  return std::hash<long long>{}(std::llround(x / quantum));
}

std::size_t hash_state(std::size_t seed, const JointState& s)
{
  const auto vehicle_hash = [&](const VehicleState& v)
    {
      seed = hash_combine(seed, quantized(v.position, 0.1));
      seed = hash_combine(seed, quantized(v.velocity, 0.01));
      seed = hash_combine(seed, std::hash<int>{}(v.lane));
    };
  vehicle_hash(s.robot);
  vehicle_hash(s.human);
  for (const auto& b : s.background)
    vehicle_hash(b);
  return seed;
}

std::size_t hash_belief(std::size_t seed, const Belief& b)
{
  for (const double p : b.probabilities())
    seed = hash_combine(seed, std::hash<std::uint64_t>{}(
          std::bit_cast<std::uint64_t>(p)));
  return seed;
}

template<typename Node>
struct MemoKey
{
  int step;
  Node node;

  bool operator==(const MemoKey&) const = default;
};

template<typename Node>
struct MemoEntry
{
  double value;
  std::vector<std::size_t> actions;
};

//==============================================================================
/// Depth-first dynamic programming over robot action sequences. Expand maps
/// (node, action index) to (child node, stage value). Ties keep the first
/// action in tie-break order, so the result matches exhaustive enumeration in
/// the same order.
template<typename Node, typename Expand, typename Hash>
class TreeSolver
{
public:
  TreeSolver(int horizon, std::size_t action_count, std::size_t budget,
    Expand expand, Hash hash)
  : _horizon(horizon),
    _action_count(action_count),
    _budget(budget),
    _expand(std::move(expand)),
    _memo(64, KeyHash{std::move(hash)})
  {
    // Intentionally blank
  }

  MemoEntry<Node> solve(const Node& root)
  {
    return solve(root, 0);
  }

  std::size_t explored() const { return _explored; }

private:
  struct KeyHash
  {
    Hash hash;
    std::size_t operator()(const MemoKey<Node>& key) const
    {
      return hash_combine(hash(key.node), std::hash<int>{}(key.step));
    }
  };

  MemoEntry<Node> solve(const Node& node, int step)
  {
    if (step == _horizon)
      return {0.0, {}};

    MemoKey<Node> key{step, node};
    if (step > 0)
    {
      const auto it = _memo.find(key);
      if (it != _memo.end())
        return it->second;
    }

    MemoEntry<Node> best{-std::numeric_limits<double>::infinity(), {}};
    for (std::size_t a = 0; a < _action_count; ++a)
    {
      if (++_explored > _budget)
      {
        throw HorizonTooLarge("planning tree exceeded the budget of "
          + std::to_string(_budget) + " nodes");
      }

      auto [child, stage] = _expand(node, a);
      const MemoEntry<Node> tail = solve(child, step + 1);
      const double value = stage + tail.value;
      if (value > best.value)
      {
        best.value = value;
        best.actions.clear();
        best.actions.push_back(a);
        best.actions.insert(
          best.actions.end(), tail.actions.begin(), tail.actions.end());
      }
    }

    if (step > 0)
      _memo.emplace(std::move(key), best);
    return best;
  }

  int _horizon;
  std::size_t _action_count;
  std::size_t _budget;
  Expand _expand;
  std::unordered_map<MemoKey<Node>, MemoEntry<Node>, KeyHash> _memo;
  std::size_t _explored = 0;
};

//==============================================================================
// Probe planning. Every hypothesis owns a branch; branches whose state and
// belief are bit-identical share one group so that the successor, likelihood
// and divergence are computed once for all of them.

struct BranchGroup
{
  JointState state;
  Belief belief;
  /// JSD(root belief, belief).
  double information = 0.0;

  bool operator==(const BranchGroup&) const = default;
};

struct ProbeNode
{
  std::vector<BranchGroup> groups;
  /// group_of[phi] indexes groups.
  std::vector<std::size_t> group_of;

  bool operator==(const ProbeNode&) const = default;
};

class ProbeExpander
{
public:
  ProbeExpander(const Belief& root_belief, const HumanUtilityModel& model,
    const DynamicsConfig& config, const PlannerConfig& planner,
    std::vector<double> actions)
  : _root(root_belief),
    _model(model),
    _config(config),
    _planner(planner),
    _actions(std::move(actions)),
    _human_order(detail::tie_break_order(config.human_accel_grid))
  {
    // Intentionally blank
  }

  std::pair<ProbeNode, double> operator()(
    const ProbeNode& node, std::size_t action) const
  {
    const Control robot_u{_actions[action], std::nullopt};
    const std::size_t n = node.group_of.size();

    ProbeNode child;
    child.group_of.assign(n, 0);

    // Child groups keyed by (parent group, human action).
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> split;
    std::vector<detail::SuccessorFeatures> features(node.groups.size());
    std::vector<bool> have_features(node.groups.size(), false);

    for (std::size_t phi = 0; phi < n; ++phi)
    {
      const std::size_t g = node.group_of[phi];
      const BranchGroup& parent = node.groups[g];
      if (!have_features[g])
      {
        features[g] = detail::successor_features(
          parent.state, robot_u, _model, _config);
        have_features[g] = true;
      }

      const std::size_t h = detail::best_response_index(_model,
          _model.grid.values()[phi], features[g], _human_order);

      const auto [it, inserted] = split.try_emplace({g, h},
          child.groups.size());
      if (inserted)
      {
        const Control human_u{_config.human_accel_grid[h], std::nullopt};
        JointState next = rollout_step(
          parent.state, robot_u, human_u, _planner, _config);
        Belief next_belief = bayes_update(parent.belief, likelihood_vector(
            parent.state, robot_u, h, _model, _config));
        const double info = jsd(_root, next_belief);
        child.groups.push_back(
          BranchGroup{std::move(next), std::move(next_belief), info});
      }
      child.group_of[phi] = it->second;
    }

    return {child, stage_value(node, child)};
  }

  /// sum_phi w(phi) [J_{t+1}(phi) - J_t(phi)] + lambda sum_phi w(phi) r_safe
  double stage_value(const ProbeNode& parent, const ProbeNode& child) const
  {
    double info = 0.0;
    double safety = 0.0;
    for (std::size_t phi = 0; phi < parent.group_of.size(); ++phi)
    {
      const double w = _root[phi];
      const BranchGroup& before = parent.groups[parent.group_of[phi]];
      const BranchGroup& after = child.groups[child.group_of[phi]];
      info += w * (after.information - before.information);
      safety += w * robot_safety_reward(after.state, _planner.safety_distance);
    }
    return info + _planner.safety_weight * safety;
  }

  double expected_information(const ProbeNode& node) const
  {
    double info = 0.0;
    for (std::size_t phi = 0; phi < node.group_of.size(); ++phi)
      info += _root[phi] * node.groups[node.group_of[phi]].information;
    return info;
  }

private:
  const Belief& _root;
  const HumanUtilityModel& _model;
  const DynamicsConfig& _config;
  const PlannerConfig& _planner;
  std::vector<double> _actions;
  std::vector<std::size_t> _human_order;
};

struct ProbeNodeHash
{
  std::size_t operator()(const ProbeNode& node) const
  {
    std::size_t seed = node.groups.size();
    for (const auto& g : node.groups)
      seed = hash_belief(hash_state(seed, g.state), g.belief);
    for (const std::size_t g : node.group_of)
      seed = hash_combine(seed, g);
    return seed;
  }
};

struct StateHash
{
  std::size_t operator()(const JointState& state) const
  {
    return hash_state(0, state);
  }
};

void check_inputs(const HumanUtilityModel& model, const DynamicsConfig& config,
  const PlannerConfig& planner, PlanObjective expected)
{
  if (planner.objective != expected)
    throw InvalidArgument("planner objective does not match the call");
  model.validate();
  config.validate();
  planner.validate(config);
}

} // anonymous namespace

//==============================================================================
PlanResult probe_plan(const JointState& state, const Belief& belief,
  const HumanUtilityModel& model, const DynamicsConfig& config,
  const PlannerConfig& planner)
{
  check_inputs(model, config, planner, PlanObjective::Probe);
  if (belief.size() != model.grid.size())
    throw GridMismatch("belief does not match the hypothesis grid");

  const auto actions = planning_actions(planner, config);
  ProbeExpander expand(belief, model, config, planner, actions);

  ProbeNode root;
  root.groups.push_back(BranchGroup{state, belief, jsd(belief, belief)});
  root.group_of.assign(belief.size(), 0);

  TreeSolver<ProbeNode, std::reference_wrapper<ProbeExpander>, ProbeNodeHash>
  solver(planner.horizon_steps, actions.size(), planner.node_budget,
    std::ref(expand), ProbeNodeHash{});
  const auto best = solver.solve(root);

  PlanResult result;
  result.value = best.value;
  result.explored_nodes = solver.explored();

  ProbeNode node = root;
  for (const std::size_t a : best.actions)
  {
    result.controls.push_back(Control{actions[a], std::nullopt});
    auto [child, stage] = expand(node, a);
    result.stage_values.push_back(stage);
    node = std::move(child);
  }
  result.expected_information = expand.expected_information(node);
  return result;
}

//==============================================================================
PlanResult influence_plan(const JointState& state, double phi_hat,
  const HumanUtilityModel& model, const DynamicsConfig& config,
  const PlannerConfig& planner, const RobotReward& reward)
{
  check_inputs(model, config, planner, PlanObjective::Influence);
  if (!reward)
    throw InvalidArgument("influence planning needs a robot reward");

  const auto actions = planning_actions(planner, config);
  const auto human_order = detail::tie_break_order(config.human_accel_grid);

  const auto expand = [&](const JointState& node, std::size_t a)
    {
      const Control robot_u{actions[a], std::nullopt};
      const auto features = detail::successor_features(
        node, robot_u, model, config);
      const std::size_t h = detail::best_response_index(
        model, phi_hat, features, human_order);
      JointState next = rollout_step(node, robot_u,
          Control{config.human_accel_grid[h], std::nullopt}, planner, config);
      const double stage = reward(next) + planner.safety_weight
        * robot_safety_reward(next, planner.safety_distance);
      return std::pair<JointState, double>{std::move(next), stage};
    };

  TreeSolver<JointState, decltype(expand), StateHash> solver(
    planner.horizon_steps, actions.size(), planner.node_budget, expand,
    StateHash{});
  const auto best = solver.solve(state);

  PlanResult result;
  result.value = best.value;
  result.explored_nodes = solver.explored();

  JointState node = state;
  for (const std::size_t a : best.actions)
  {
    result.controls.push_back(Control{actions[a], std::nullopt});
    auto [child, stage] = expand(node, a);
    result.stage_values.push_back(stage);
    node = std::move(child);
  }
  return result;
}

} // namespace infoprobe

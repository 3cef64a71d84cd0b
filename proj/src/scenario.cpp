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

#include <infoprobe/scenario.hpp>
#include <infoprobe/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infoprobe {

namespace {

constexpr double kBlockedAccel = -0.2;

std::size_t steps_of(double seconds, double dt)
{
  return static_cast<std::size_t>(std::llround(seconds / dt));
}

bool is_multiple(double seconds, double dt)
{
  const double ratio = seconds / dt;
  return ratio >= 1.0 && std::abs(ratio - std::round(ratio)) < 1e-9;
}

/// Acceleration that keeps v + a dt inside [0, limit]. A vehicle above the
/// limit brakes down to it no harder than the hard-braking bound.
double saturate(double velocity, double accel, double dt, double limit)
{
  const double next = std::clamp(velocity + accel * dt, 0.0, limit);
  if (next == velocity + accel * dt)
    return accel;
  return std::max((next - velocity) / dt, std::min(accel, -kHardBraking));
}

std::vector<std::size_t> inner_lane_order(const JointState& state)
{
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < state.background.size(); ++i)
  {
    if (state.background[i].lane == kInnerLane)
      order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
    [&](std::size_t a, std::size_t b)
    { return state.background[a].position > state.background[b].position; });
  return order;
}

double gap_ahead_of_robot(const JointState& s)
{
  const auto leader = find_leader(s, VehicleId::robot());
  if (!leader)
    return std::numeric_limits<double>::infinity();
  return vehicle(s, *leader).position - s.robot.position;
}

std::vector<VehicleId> all_ids(const JointState& state)
{
  std::vector<VehicleId> ids{VehicleId::robot(), VehicleId::human()};
  for (std::size_t i = 0; i < state.background.size(); ++i)
    ids.push_back(VehicleId::background(i));
  return ids;
}

std::optional<std::string> collision(const JointState& before,
  const JointState& after, double lane_end)
{
  const auto ids = all_ids(after);
  for (const VehicleId p : {VehicleId::robot(), VehicleId::human()})
  {
    const auto& a1 = vehicle(after, p);
    const char* name = p.role == VehicleId::Role::Robot ? "robot" : "human";
    if (a1.lane == kOuterLane && a1.position >= lane_end)
      return std::string(name) + " ran past the end of the outer lane";

    for (const VehicleId q : ids)
    {
      if (q == p || (p.role == VehicleId::Role::Human
          && q.role == VehicleId::Role::Robot))
      {
        continue;
      }
      const auto& b1 = vehicle(after, q);
      if (a1.lane != b1.lane)
        continue;
      const double d1 = b1.position - a1.position;
      const auto& a0 = vehicle(before, p);
      const auto& b0 = vehicle(before, q);
      const double d0 = b0.position - a0.position;
      const bool crossed = a0.lane == b0.lane && ((d0 > 0.0) != (d1 > 0.0));
      if (d1 == 0.0 || crossed)
        return std::string(name) + " collided with another vehicle";
    }
  }
  return std::nullopt;
}

} // anonymous namespace

//==============================================================================
std::string to_string(ScenarioKind kind)
{
  return kind == ScenarioKind::LaneAdvise ? "lane-advise" : "gap-create";
}

std::string to_string(RunMode mode)
{
  return mode == RunMode::Active ? "active" : "passive";
}

std::string to_string(Phase phase)
{
  switch (phase)
  {
    case Phase::Observe: return "observe";
    case Phase::Probe: return "probe";
    case Phase::Influence: return "influence";
    case Phase::Done: return "done";
  }
  return "unknown";
}

std::string to_string(VehicleClass cls)
{
  switch (cls)
  {
    case VehicleClass::Robot: return "robot";
    case VehicleClass::Human: return "human";
    case VehicleClass::Background: return "background";
  }
  return "unknown";
}

std::string to_string(ObjectiveKind kind)
{
  switch (kind)
  {
    case ObjectiveKind::AlignWithGap: return "align-with-gap";
    case ObjectiveKind::BlockAndSlow: return "block-and-slow";
    case ObjectiveKind::MergeRobot: return "merge-robot";
    case ObjectiveKind::OpenGap: return "open-gap";
    case ObjectiveKind::AwaitHumanMerge: return "await-human-merge";
  }
  return "unknown";
}

//==============================================================================
ScenarioConfig ScenarioConfig::lane_advise(RunMode mode)
{
  ScenarioConfig c;
  c.kind = ScenarioKind::LaneAdvise;
  c.mode = mode;
  c.robot_idm.tau_gap = 0.5;
  c.robot_initial = {100.0, 20.0, kOuterLane};
  c.human_initial = {0.0, 20.0, kOuterLane};
  IdmParams fast_lane;
  fast_lane.v_des = 27.0;
  for (const double x : {-100.0, -180.0, -230.0, -290.0})
    c.background.push_back({{x, 20.0, kInnerLane}, fast_lane});

  c.dynamics.robot_speed_limit = 27.0;
  c.probe_speed_limit = 23.0;
  c.model.grid = HypothesisGrid::desired_velocity();
  c.model.w_speed = 1.0;
  c.model.w_safety = 1.0;
  c.model.rationality_beta = 0.12;
  c.model.horizon = 10.0;
  c.planner.robot_actions = {-3.0, -1.5, 0.0, 1.0, 2.0};
  return c;
}

//==============================================================================
ScenarioConfig ScenarioConfig::gap_create(RunMode mode)
{
  ScenarioConfig c;
  c.kind = ScenarioKind::GapCreate;
  c.mode = mode;
  c.idm.v_des = 20.0;
  c.robot_idm.tau_gap = 0.5;
  c.robot_initial = {100.0, 20.0, kOuterLane};
  c.human_initial = {0.0, 20.0, kOuterLane};
  c.lane_end = 1900.0;
  c.probe_speed_limit = 18.0;

  // A platoon at its IDM equilibrium: the lead cruises at its desired speed
  // and every follower sits at the equilibrium gap for 20 m/s.
  IdmParams lead;
  lead.v_des = 20.0;
  const IdmParams follower;
  const double ratio = 20.0 / follower.v_des;
  const double spacing = (follower.d_min + follower.tau_gap * 20.0)
    / std::sqrt(1.0 - ratio * ratio * ratio * ratio);
  for (int i = 0; i < 12; ++i)
  {
    c.background.push_back({{230.0 - spacing * i, 20.0, kInnerLane},
      i == 0 ? lead : follower});
  }

  c.model.grid = HypothesisGrid::desired_headway();
  c.model.w_headway = 0.01;
  c.model.w_speed = 0.06;
  c.model.rationality_beta = 0.05;
  c.planner.robot_actions = {-0.5, -0.25, 0.0, 0.25, 0.5};
  if (mode == RunMode::Passive)
    c.passive_influence_time = 70.0;
  return c;
}

//==============================================================================
void ScenarioConfig::validate() const
{
  dynamics.validate();
  model.validate();
  planner.validate(dynamics);
  idm.validate();
  robot_idm.validate();
  for (const auto& b : background)
  {
    b.idm.validate();
    if (b.initial.velocity < 0.0)
      throw InvalidArgument("background velocity must be nonnegative");
  }

  if (!(duration > 0.0) || !is_multiple(duration, dynamics.dt))
    throw InvalidArgument("duration must be a positive multiple of dt");
  if (!is_multiple(window, dynamics.dt))
    throw InvalidArgument("window must be a positive multiple of dt");
  if (!is_multiple(planner.plan_dt, dynamics.dt))
    throw InvalidArgument("plan_dt must be a positive multiple of dt");
  if (!is_multiple(observation_interval, dynamics.dt))
    throw InvalidArgument("observation interval must be a positive multiple of dt");
  if (!is_multiple(snapshot_interval, dynamics.dt))
    throw InvalidArgument("snapshot interval must be a positive multiple of dt");
  if (!(termination_threshold > 0.0))
    throw InvalidArgument("termination threshold must be positive");
  if (!(probe_speed_limit > 0.0))
    throw InvalidArgument("probe speed limit must be positive");
  if (passive_influence_time && (*passive_influence_time < 0.0))
    throw InvalidArgument("passive influence time must be nonnegative");

  if (human_initial.lane != robot_initial.lane
    || !(human_initial.position < robot_initial.position))
  {
    throw InvalidArgument("the human must start behind the robot in its lane");
  }
  if (human_initial.velocity < 0.0 || robot_initial.velocity < 0.0)
    throw InvalidArgument("initial velocities must be nonnegative");
  if (robot_initial.velocity > dynamics.robot_speed_limit)
    throw InvalidArgument("robot starts above its speed limit");
  if (robot_initial.lane == kOuterLane && !(robot_initial.position < lane_end))
    throw InvalidArgument("vehicles must start before the lane end");
}

//==============================================================================
ScenarioCollision::ScenarioCollision(const std::string& what, RunLog log)
: CollisionDetected(what), _log(std::move(log))
{
}

//==============================================================================
const IdmParams& TrafficModel::params(VehicleId id) const
{
  switch (id.role)
  {
    case VehicleId::Role::Robot: return robot;
    case VehicleId::Role::Human: return human;
    case VehicleId::Role::Background: break;
  }
  if (id.index >= background.size())
    throw IndexOutOfRange("no IDM constants for this background vehicle");
  return background[id.index];
}

//==============================================================================
double traffic_idm_accel(const JointState& state, VehicleId id,
  const TrafficModel& traffic)
{
  const auto& me = vehicle(state, id);
  double gap = std::numeric_limits<double>::infinity();
  double leader_velocity = 0.0;
  if (const auto leader = find_leader(state, id))
  {
    gap = vehicle(state, *leader).position - me.position;
    leader_velocity = vehicle(state, *leader).velocity;
  }
  if (me.lane == kOuterLane && traffic.lane_end - me.position < gap)
  {
    gap = traffic.lane_end - me.position;
    leader_velocity = 0.0;
  }

  if (!(gap > 0.0))
    return -kHardBraking;
  return idm_accel(me.velocity, gap, leader_velocity, traffic.params(id));
}

//==============================================================================
bool lane_change_safe(const JointState& state, VehicleId id, int target_lane,
  const TrafficModel& traffic)
{
  JointState moved = state;
  const auto& me = vehicle(state, id);
  switch (id.role)
  {
    case VehicleId::Role::Robot: moved.robot.lane = target_lane; break;
    case VehicleId::Role::Human: moved.human.lane = target_lane; break;
    case VehicleId::Role::Background:
      moved.background.at(id.index).lane = target_lane;
      break;
  }

  if (const auto leader = find_leader(moved, id))
  {
    const auto& l = vehicle(moved, *leader);
    const double gap = l.position - me.position;
    const double wanted = std::max(0.0,
      idm_desired_gap(me.velocity, l.velocity, traffic.params(id)));
    if (!(gap > 0.0) || gap < wanted)
      return false;
  }
  if (target_lane == kOuterLane && traffic.lane_end - me.position
      < traffic.params(id).d_min)
  {
    return false;
  }

  if (const auto follower = find_follower(moved, id))
  {
    const auto& f = vehicle(moved, *follower);
    const double gap = me.position - f.position;
    if (!(gap > 0.0))
      return false;
    const auto& fp = traffic.params(*follower);
    if (idm_accel(f.velocity, gap, me.velocity, fp) < -fp.b_pref)
      return false;
  }

  // Nothing may sit exactly alongside.
  for (const VehicleId other : all_ids(moved))
  {
    if (!(other == id) && vehicle(moved, other).lane == target_lane
      && vehicle(moved, other).position == me.position)
    {
      return false;
    }
  }
  return true;
}

//==============================================================================
std::optional<int> human_lane_change_check(const JointState& state,
  const TrafficModel& traffic)
{
  if (state.human.lane != kOuterLane)
    return std::nullopt;
  if (traffic_idm_accel(state, VehicleId::human(), traffic) > kBlockedAccel)
    return std::nullopt;
  if (!lane_change_safe(state, VehicleId::human(), kInnerLane, traffic))
    return std::nullopt;
  return kInnerLane;
}

std::optional<int> human_lane_change_check(const JointState& state,
  const IdmParams& idm)
{
  TrafficModel traffic{idm, idm,
    std::vector<IdmParams>(state.background.size(), idm),
    std::numeric_limits<double>::infinity()};
  return human_lane_change_check(state, traffic);
}

//==============================================================================
Gap gap_between(const JointState& state, std::size_t leader,
  std::size_t follower)
{
  const auto& l = state.background.at(leader);
  const auto& f = state.background.at(follower);
  Gap g;
  g.leader = leader;
  g.follower = follower;
  g.length = l.position - f.position;
  g.midpoint = 0.5 * (l.position + f.position);
  return g;
}

//==============================================================================
Gap widest_gap(const JointState& state)
{
  const auto order = inner_lane_order(state);
  if (order.empty())
    throw NoBackgroundVehicles("no background vehicle in the inner lane");

  if (order.size() == 1)
  {
    Gap g;
    g.leader = order.front();
    g.length = std::numeric_limits<double>::infinity();
    g.midpoint = -std::numeric_limits<double>::infinity();
    return g;
  }

  const double x = state.human.position;
  std::optional<Gap> best;
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
  {
    Gap g = gap_between(state, order[i], order[i + 1]);
    g.index = i;
    if (!best || g.length > best->length)
    {
      best = g;
      continue;
    }
    if (g.length < best->length)
      continue;

    const double d = std::abs(g.midpoint - x);
    const double best_d = std::abs(best->midpoint - x);
    if (d < best_d || (d == best_d && g.midpoint >= x))
      best = g;
  }
  return *best;
}

//==============================================================================
std::vector<AtomicObjective> influence_objectives(const ScenarioConfig& config,
  double phi_hat, const JointState& state)
{
  const InfluenceTuning t = config.influence;
  std::vector<AtomicObjective> objectives;

  if (config.kind == ScenarioKind::LaneAdvise)
  {
    if (phi_hat < config.cutoff_velocity)
      throw CutoffNotMet("estimated desired velocity is below the cutoff");

    const Gap gap = widest_gap(state);
    if (!gap.follower)
      throw InvalidArgument("lane advising needs a bounded inner-lane gap");
    const std::size_t lead = gap.leader;
    const std::size_t follow = *gap.follower;
    const double headway = t.align_offset;

    AtomicObjective align;
    align.kind = ObjectiveKind::AlignWithGap;
    align.target = gap.midpoint + headway;
    align.reward = [=](const JointState& s)
    {
      const Gap g = gap_between(s, lead, follow);
      const double v = 0.5 * (s.background[lead].velocity
        + s.background[follow].velocity);
      const double dx = s.robot.position - (g.midpoint + headway);
      const double dv = s.robot.velocity - v;
      return -t.position_weight * dx * dx - t.velocity_weight * dv * dv;
    };
    align.done = [=](const JointState& s)
    {
      const Gap g = gap_between(s, lead, follow);
      return std::abs(s.human.position - g.midpoint) <= 0.25 * g.length;
    };
    objectives.push_back(std::move(align));

    AtomicObjective block;
    block.kind = ObjectiveKind::BlockAndSlow;
    block.target = phi_hat - t.block_margin;
    const double v_block = block.target;
    block.reward = [=](const JointState& s)
    {
      const double dx = s.robot.position - s.human.position - t.block_headway;
      const double dv = s.robot.velocity - v_block;
      return -t.position_weight * dx * dx - t.velocity_weight * dv * dv;
    };
    block.done = [](const JointState& s)
    { return s.human.lane == kInnerLane; };
    objectives.push_back(std::move(block));
    return objectives;
  }

  // Merge into the nearest inner-lane gap that does not lie ahead of the
  // robot, since the robot ends up behind the human anyway. Without one,
  // take the nearest gap.
  const auto order = inner_lane_order(state);
  if (order.size() < 2)
    throw InvalidArgument("gap creation needs a bounded inner-lane gap");
  std::optional<Gap> slot;
  const auto better = [&](const Gap& g)
  {
    if (!slot)
      return true;
    const bool g_behind = g.midpoint <= state.robot.position;
    const bool s_behind = slot->midpoint <= state.robot.position;
    if (g_behind != s_behind)
      return g_behind;
    return std::abs(g.midpoint - state.robot.position)
      < std::abs(slot->midpoint - state.robot.position);
  };
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
  {
    const Gap g = gap_between(state, order[i], order[i + 1]);
    if (better(g))
      slot = g;
  }
  const std::size_t lead = slot->leader;
  const std::size_t follow = *slot->follower;

  AtomicObjective merge;
  merge.kind = ObjectiveKind::MergeRobot;
  merge.target = slot->midpoint;
  merge.reward = [=](const JointState& s)
  {
    const Gap g = gap_between(s, lead, follow);
    const double v = 0.5 * (s.background[lead].velocity
      + s.background[follow].velocity);
    const double dx = s.robot.position - g.midpoint;
    const double dv = s.robot.velocity - (v - t.tracking_gain * dx);
    return -t.position_weight * dx * dx - t.velocity_weight * dv * dv;
  };
  merge.done = [](const JointState& s)
  { return s.robot.lane == kInnerLane; };
  objectives.push_back(std::move(merge));

  // Fall back behind the human while the gap ahead grows to the target.
  const double target = phi_hat + config.idm.d_min;
  const IdmParams robot = config.robot_idm;
  const RobotReward open_reward = [=](const JointState& s)
  {
    const auto leader = find_leader(s, VehicleId::robot());
    const double behind_human = s.human.position
      - (robot.d_min + robot.tau_gap * s.human.velocity);
    double wanted = behind_human;
    double v_ref = s.human.velocity;
    if (leader)
    {
      const auto& l = vehicle(s, *leader);
      wanted = std::min(wanted, l.position - target);
      v_ref = std::min(v_ref, l.velocity);
    }
    const double dx = s.robot.position - wanted;
    const double dv = s.robot.velocity - (v_ref - t.tracking_gain * dx);
    return -t.position_weight * dx * dx - t.velocity_weight * dv * dv;
  };

  AtomicObjective open;
  open.kind = ObjectiveKind::OpenGap;
  open.target = target;
  open.reward = open_reward;
  open.done = [=](const JointState& s)
  { return gap_ahead_of_robot(s) >= target; };
  objectives.push_back(std::move(open));

  AtomicObjective await;
  await.kind = ObjectiveKind::AwaitHumanMerge;
  await.target = target;
  await.reward = open_reward;
  await.done = [](const JointState& s)
  { return s.human.lane == kInnerLane; };
  objectives.push_back(std::move(await));
  return objectives;
}

//==============================================================================
namespace {

class Episode
{
public:
  explicit Episode(const ScenarioConfig& config)
  : _c(config),
    _dt(config.dynamics.dt),
    _steps(steps_of(config.duration, _dt)),
    _plan_every(steps_of(config.planner.plan_dt, _dt)),
    _window_steps(steps_of(config.window, _dt)),
    _snapshot_every(steps_of(config.snapshot_interval, _dt)),
    _observe_every(steps_of(config.observation_interval, _dt)),
    _belief(Belief::uniform(config.model.grid.size()))
  {
    _traffic.human = config.idm;
    _traffic.robot = config.robot_idm;
    _traffic.lane_end = config.lane_end;
    for (const auto& b : config.background)
    {
      _traffic.background.push_back(b.idm);
      _state.background.push_back(b.initial);
    }
    _state.robot = config.robot_initial;
    _state.human = config.human_initial;

    _probe_dynamics = config.dynamics;
    _probe_dynamics.robot_speed_limit = std::min(
      config.dynamics.robot_speed_limit, config.probe_speed_limit);

    _probe = config.planner;
    _probe.objective = PlanObjective::Probe;
    _probe.background_idm = _traffic.background;
    _influence = _probe;
    _influence.objective = PlanObjective::Influence;

    if (config.passive_influence_time)
      _passive_start = steps_of(*config.passive_influence_time, _dt);
  }

  RunLog run()
  {
    for (std::size_t k = 0; k <= _steps; ++k)
    {
      if (_c.record_all_beliefs || k % _snapshot_every == 0)
      {
        const auto p = _belief.probabilities();
        _log.snapshots.push_back({k * _dt, {p.begin(), p.end()}});
      }

      if (k == _steps)
      {
        push_record({_state, Control{}, Control{},
          std::vector<double>(_state.background.size(), 0.0), _phase});
        break;
      }
      step(k);
    }

    _log.final_belief.assign(_belief.probabilities().begin(),
      _belief.probabilities().end());
    _log.phi_map = estimate_phi(_belief, _c.model.grid, EstimateMode::MAP);
    _log.phi_mean = estimate_phi(_belief, _c.model.grid, EstimateMode::Mean);
    return std::move(_log);
  }

private:
  enum class Stage { Learning, Influencing, Finished };

  void push_record(StepRecord record)
  {
    if (_log.phases.empty() || _log.phases.back().phase != record.phase)
      _log.phases.push_back({record.state.time, record.phase});
    _log.records.push_back(std::move(record));
  }

  void start_influence(std::size_t k)
  {
    const double phi_hat
      = estimate_phi(_belief, _c.model.grid, EstimateMode::MAP);
    try
    {
      _objectives = influence_objectives(_c, phi_hat, _state);
    }
    catch (const CutoffNotMet&)
    {
      _stage = Stage::Finished;
      return;
    }
    _log.phi_hat = phi_hat;
    _log.influence_start_time = k * _dt;
    _influence_start = k;
    _stage = Stage::Influencing;
  }

  /// Commanded robot control and phase for step k.
  Control robot_control(std::size_t k)
  {
    if (_stage == Stage::Learning)
    {
      if (_c.mode == RunMode::Passive)
      {
        if (_passive_start && k >= *_passive_start)
          start_influence(k);
        else
        {
          _phase = Phase::Observe;
          return Control{};
        }
      }
      else
      {
        const bool probing = (k / _window_steps) % 2 == 1;
        _phase = probing ? Phase::Probe : Phase::Observe;

        // The stopping rule is evaluated on the planner clock once the first
        // observation window is over, in either window kind.
        if (k >= _window_steps && (k % _window_steps) % _plan_every == 0)
        {
          const PlanResult plan = probe_plan(
            _state, _belief, _c.model, _probe_dynamics, _probe);
          ++_log.planner_calls;
          if (plan.expected_information < _c.termination_threshold)
          {
            _log.probe_termination_time = k * _dt;
            start_influence(k);
          }
          else
            _held = plan.controls.front();
        }
        if (_stage == Stage::Learning)
          return probing ? _held : Control{};
      }
    }

    if (_stage == Stage::Influencing)
    {
      _phase = Phase::Influence;
      if ((k - _influence_start) % _plan_every == 0)
      {
        while (_current < _objectives.size()
          && _objectives[_current].done(_state))
        {
          ++_current;
        }
        if (_current == _objectives.size())
          _stage = Stage::Finished;
        else
        {
          if (_logged != _current)
          {
            _log.objectives.push_back(
              {k * _dt, _objectives[_current].kind});
            _logged = _current;
          }
          const PlanResult plan = influence_plan(_state, *_log.phi_hat,
            _c.model, _c.dynamics, _influence, _objectives[_current].reward);
          ++_log.planner_calls;
          _held = plan.controls.front();
        }
      }

      if (_stage == Stage::Influencing)
      {
        Control u{_held.acceleration, std::nullopt};
        if (_objectives[_current].kind == ObjectiveKind::MergeRobot
          && _state.robot.lane == kOuterLane
          && lane_change_safe(_state, VehicleId::robot(), kInnerLane, _traffic))
        {
          u.lane_change = kInnerLane;
        }
        return u;
      }
    }

    // A passive observer holds its speed, braking only when a leader
    // requires it. Once done the robot simply drives.
    const double idm = traffic_idm_accel(_state, VehicleId::robot(), _traffic);
    if (_c.mode == RunMode::Passive && !_log.influence_start_time)
    {
      _phase = Phase::Observe;
      return Control{std::min(0.0, idm), std::nullopt};
    }
    _phase = Phase::Done;
    return Control{idm, std::nullopt};
  }

  void step(std::size_t k)
  {
    _state.time = k * _dt;
    Control robot_u = robot_control(k);
    const bool probing = _stage == Stage::Learning
      && _c.mode == RunMode::Active;
    const double limit = probing
      ? _probe_dynamics.robot_speed_limit : _c.dynamics.robot_speed_limit;
    robot_u.acceleration = saturate(
      _state.robot.velocity, robot_u.acceleration, _dt, limit);

    Control human_u;
    human_u.acceleration = saturate(_state.human.velocity,
      traffic_idm_accel(_state, VehicleId::human(), _traffic), _dt,
      std::numeric_limits<double>::infinity());
    // Where the lane ends the human leaves it as soon as that is safe.
    if (std::isfinite(_traffic.lane_end) && _state.human.lane == kOuterLane)
    {
      if (lane_change_safe(_state, VehicleId::human(), kInnerLane, _traffic))
        human_u.lane_change = kInnerLane;
    }
    else
    {
      human_u.lane_change = human_lane_change_check(_state, _traffic);
    }

    std::vector<double> background(_state.background.size());
    for (std::size_t i = 0; i < background.size(); ++i)
    {
      background[i] = saturate(_state.background[i].velocity,
        traffic_idm_accel(_state, VehicleId::background(i), _traffic), _dt,
        std::numeric_limits<double>::infinity());
    }

    if (_stage == Stage::Learning && k % _observe_every == 0)
    {
      _belief = belief_update(
        _belief, _state, robot_u, human_u, _c.model, _c.dynamics);
    }

    if (robot_u.lane_change && !_log.robot_lane_change_time)
      _log.robot_lane_change_time = k * _dt;
    if (human_u.lane_change && !_log.human_lane_change_time)
      _log.human_lane_change_time = k * _dt;

    JointState next = joint_step(
      _state, robot_u, human_u, background, _c.dynamics);
    next.time = (k + 1) * _dt;

    push_record({_state, robot_u, human_u, std::move(background), _phase});

    if (const auto what = collision(_state, next, _c.lane_end))
    {
      push_record({next, Control{}, Control{},
        std::vector<double>(next.background.size(), 0.0), _phase});
      _log.final_belief.assign(_belief.probabilities().begin(),
      _belief.probabilities().end());
      _log.phi_map = estimate_phi(_belief, _c.model.grid, EstimateMode::MAP);
      _log.phi_mean
        = estimate_phi(_belief, _c.model.grid, EstimateMode::Mean);
      throw ScenarioCollision(*what + " at t = " + std::to_string(next.time)
        + " s", std::move(_log));
    }
    _state = std::move(next);
  }

  const ScenarioConfig& _c;
  double _dt;
  std::size_t _steps;
  std::size_t _plan_every;
  std::size_t _window_steps;
  std::size_t _snapshot_every;
  std::size_t _observe_every;
  std::optional<std::size_t> _passive_start;

  TrafficModel _traffic;
  DynamicsConfig _probe_dynamics;
  PlannerConfig _probe;
  PlannerConfig _influence;

  JointState _state;
  Belief _belief;
  Stage _stage = Stage::Learning;
  Phase _phase = Phase::Observe;
  Control _held;
  std::vector<AtomicObjective> _objectives;
  std::size_t _current = 0;
  std::optional<std::size_t> _logged;
  std::size_t _influence_start = 0;
  RunLog _log;
};

} // anonymous namespace

//==============================================================================
RunLog run_scenario(const ScenarioConfig& config)
{
  config.validate();
  return Episode(config).run();
}

//==============================================================================
namespace {

std::vector<const VehicleState*> members(const JointState& s, VehicleClass cls)
{
  switch (cls)
  {
    case VehicleClass::Robot: return {&s.robot};
    case VehicleClass::Human: return {&s.human};
    case VehicleClass::Background: break;
  }
  std::vector<const VehicleState*> out;
  for (const auto& b : s.background)
    out.push_back(&b);
  return out;
}

std::vector<double> controls(const StepRecord& r, VehicleClass cls)
{
  switch (cls)
  {
    case VehicleClass::Robot: return {r.robot_u.acceleration};
    case VehicleClass::Human: return {r.human_u.acceleration};
    case VehicleClass::Background: break;
  }
  return r.background_accels;
}

double mean(const std::vector<double>& values)
{
  if (values.empty())
    return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0)
    / static_cast<double>(values.size());
}

} // anonymous namespace

//==============================================================================
std::vector<double> metric_velocity_deviation(const RunLog& log,
  VehicleClass cls)
{
  std::vector<double> out;
  if (log.records.empty())
    return out;

  const auto first = members(log.records.front().state, cls);
  out.reserve(log.records.size());
  for (const auto& r : log.records)
  {
    const auto now = members(r.state, cls);
    std::vector<double> dv(now.size());
    for (std::size_t i = 0; i < now.size(); ++i)
      dv[i] = now[i]->velocity - first[i]->velocity;
    out.push_back(mean(dv));
  }
  return out;
}

//==============================================================================
std::vector<double> cumulative_abs_control_series(const RunLog& log,
  double dt, VehicleClass cls)
{
  std::vector<double> out;
  if (log.records.empty())
    return out;

  std::vector<double> totals(controls(log.records.front(), cls).size(), 0.0);
  out.push_back(0.0);
  for (std::size_t k = 0; k + 1 < log.records.size(); ++k)
  {
    const auto a = controls(log.records[k], cls);
    for (std::size_t i = 0; i < totals.size(); ++i)
      totals[i] += std::abs(a[i]) * dt;
    out.push_back(mean(totals));
  }
  return out;
}

double metric_cumulative_abs_control(const RunLog& log, double dt,
  VehicleClass cls)
{
  const auto series = cumulative_abs_control_series(log, dt, cls);
  return series.empty() ? 0.0 : series.back();
}

} // namespace infoprobe

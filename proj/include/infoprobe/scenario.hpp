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

#ifndef INFOPROBE__SCENARIO_HPP
#define INFOPROBE__SCENARIO_HPP

#include <infoprobe/dynamics.hpp>
#include <infoprobe/errors.hpp>
#include <infoprobe/inference.hpp>
#include <infoprobe/model.hpp>
#include <infoprobe/planning.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace infoprobe {

enum class ScenarioKind { LaneAdvise, GapCreate };
enum class RunMode { Active, Passive };
enum class Phase { Observe, Probe, Influence, Done };
enum class VehicleClass { Robot, Human, Background };

std::string to_string(ScenarioKind kind);
std::string to_string(RunMode mode);
std::string to_string(VehicleClass cls);
std::string to_string(Phase phase);

struct BackgroundVehicle
{
  VehicleState initial;
  IdmParams idm;
};

/// Knobs of the atomic influence objectives.
struct InfluenceTuning
{
  /// Weight on squared position tracking error, 1/m^2.
  double position_weight = 0.01;
  /// Weight on squared velocity tracking error, s^2/m^2.
  double velocity_weight = 1.0;
  /// BlockAndSlow tracks phi_hat minus this margin, m/s.
  double block_margin = 2.0;
  /// AlignWithGap parks the robot this far ahead of the gap midpoint, m.
  double align_offset = 40.0;
  /// BlockAndSlow closes the headway to the human down to this, m.
  double block_headway = 20.0;
  /// The gap-creation objectives add this times the position error to their
  /// velocity reference, 1/s.
  double tracking_gain = 0.2;
};

struct ScenarioConfig
{
  ScenarioKind kind = ScenarioKind::LaneAdvise;
  RunMode mode = RunMode::Active;

  /// Ground-truth IDM constants of the human.
  IdmParams idm;
  /// IDM constants the robot uses to judge its own merge and to brake behind
  /// a leader once its objectives are done.
  IdmParams robot_idm;
  std::vector<BackgroundVehicle> background;
  VehicleState human_initial;
  VehicleState robot_initial;
  /// Position where the outer lane ends. Vehicles still in the outer lane see
  /// a stationary obstacle there.
  double lane_end = std::numeric_limits<double>::infinity();

  double duration = 120.0;
  std::uint64_t rng_seed = 0;
  /// LaneAdvise only: influence starts only if phi_hat reaches this, m/s.
  double cutoff_velocity = 23.0;

  /// Length of each observe and probe window, s.
  double window = 5.0;
  /// Probing stops once the planned expected information drops below this.
  double termination_threshold = 5e-3;
  double snapshot_interval = 10.0;
  /// Time between belief updates, s. Matches the planner step by default so
  /// the information a probe plan predicts is the information it collects.
  double observation_interval = 1.0;
  /// Robot speed cap while information is being gathered, m/s. The
  /// dynamics limit applies afterwards.
  double probe_speed_limit = std::numeric_limits<double>::infinity();
  /// Passive runs only: start the influence pipeline with the passive
  /// estimate at this time.
  std::optional<double> passive_influence_time;
  /// Store the belief after every step instead of every snapshot_interval.
  bool record_all_beliefs = false;

  DynamicsConfig dynamics = DynamicsConfig::defaults();
  HumanUtilityModel model;
  PlannerConfig planner;
  InfluenceTuning influence;

  /// Lane advising: a fast human stuck behind the robot in the outer lane.
  static ScenarioConfig lane_advise(RunMode mode);
  /// Gap creation: the outer lane ends and the inner lane is a dense platoon.
  static ScenarioConfig gap_create(RunMode mode);

  /// Throws InvalidArgument.
  void validate() const;
};

enum class ObjectiveKind
{
  AlignWithGap,
  BlockAndSlow,
  MergeRobot,
  OpenGap,
  AwaitHumanMerge
};

std::string to_string(ObjectiveKind kind);

struct StepRecord
{
  JointState state;
  Control robot_u;
  Control human_u;
  std::vector<double> background_accels;
  Phase phase = Phase::Observe;
};

struct BeliefSnapshot
{
  double time = 0.0;
  std::vector<double> probabilities;
};

struct PhaseBoundary
{
  double time = 0.0;
  Phase phase = Phase::Observe;
};

struct ObjectiveStart
{
  double time = 0.0;
  ObjectiveKind kind = ObjectiveKind::AlignWithGap;
};

struct RunLog
{
  std::vector<StepRecord> records;
  std::vector<BeliefSnapshot> snapshots;
  std::vector<PhaseBoundary> phases;
  std::vector<ObjectiveStart> objectives;
  std::vector<double> final_belief;
  double phi_map = 0.0;
  double phi_mean = 0.0;
  /// Estimate the influence pipeline was started with, if any.
  std::optional<double> phi_hat;
  std::optional<double> probe_termination_time;
  std::optional<double> influence_start_time;
  std::optional<double> robot_lane_change_time;
  std::optional<double> human_lane_change_time;
  std::size_t planner_calls = 0;
};

/// Thrown by run_scenario when two vehicles meet. Carries the log up to and
/// including the colliding step.
class ScenarioCollision : public CollisionDetected
{
public:
  ScenarioCollision(const std::string& what, RunLog log);

  const RunLog& log() const { return _log; }

private:
  RunLog _log;
};

/// Simulates one episode. Throws ScenarioCollision.
RunLog run_scenario(const ScenarioConfig& config);

//==============================================================================
struct Gap
{
  /// Background indices of the vehicles ahead of and behind the gap. The
  /// trailing gap of a lone vehicle has no follower.
  std::size_t leader = 0;
  std::optional<std::size_t> follower;
  /// Position of the gap among the inner-lane background vehicles, counted
  /// from the front.
  std::size_t index = 0;
  double length = 0.0;
  double midpoint = 0.0;
};

/// Largest gap between consecutive inner-lane background vehicles. Ties go to
/// the gap whose midpoint is nearest ahead of the human. A single vehicle
/// yields its trailing gap with infinite length and midpoint. Throws
/// NoBackgroundVehicles.
Gap widest_gap(const JointState& state);

/// Gap of the given background pair in state.
Gap gap_between(const JointState& state, std::size_t leader,
  std::size_t follower);

/// Who follows which IDM constants, plus the outer-lane end.
struct TrafficModel
{
  IdmParams human;
  IdmParams robot;
  std::vector<IdmParams> background;
  double lane_end = std::numeric_limits<double>::infinity();

  const IdmParams& params(VehicleId id) const;
};

/// IDM acceleration of id behind its same-lane leader, or behind the lane end
/// in the outer lane, whichever is nearer.
double traffic_idm_accel(const JointState& state, VehicleId id,
  const TrafficModel& traffic);

/// Gap acceptance for id moving into target_lane: the new leader is at least
/// the IDM desired gap ahead and the new follower would brake no harder than
/// its comfortable deceleration.
bool lane_change_safe(const JointState& state, VehicleId id, int target_lane,
  const TrafficModel& traffic);

/// The inner lane if the human in the outer lane is being blocked (its IDM
/// acceleration is at most -0.2 m/s^2) and the move is safe.
std::optional<int> human_lane_change_check(const JointState& state,
  const TrafficModel& traffic);

/// Same, with every vehicle driving by idm and no lane end.
std::optional<int> human_lane_change_check(const JointState& state,
  const IdmParams& idm);

//==============================================================================
struct AtomicObjective
{
  ObjectiveKind kind = ObjectiveKind::AlignWithGap;
  /// The tracked quantity: a velocity for BlockAndSlow, a gap length for
  /// OpenGap and AwaitHumanMerge, a position otherwise.
  double target = 0.0;
  /// Robot reward, excluding the safety term the planner adds.
  RobotReward reward;
  std::function<bool(const JointState&)> done;
};

/// The ordered atomic objectives of the scenario's influence pipeline, built
/// from the state at the time influence starts. Throws CutoffNotMet.
std::vector<AtomicObjective> influence_objectives(const ScenarioConfig& config,
  double phi_hat, const JointState& state);

//==============================================================================
/// Per-record v(t) - v(0), averaged over the vehicles of the class.
std::vector<double> metric_velocity_deviation(const RunLog& log,
  VehicleClass cls);

/// Running sum of |a| dt per vehicle, averaged over the class; entry k covers
/// the controls of records 0..k-1.
std::vector<double> cumulative_abs_control_series(const RunLog& log,
  double dt, VehicleClass cls);

/// Final value of cumulative_abs_control_series.
double metric_cumulative_abs_control(const RunLog& log, double dt,
  VehicleClass cls);

} // namespace infoprobe

#endif // INFOPROBE__SCENARIO_HPP

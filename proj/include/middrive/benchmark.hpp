// Copyright 2026 The middrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "middrive/controller.hpp"
#include "middrive/planner.hpp"
#include "middrive/town.hpp"
#include "middrive/world.hpp"

namespace middrive {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InstructionMode { PerSegment, LongHorizonAtStart };
const char* to_string(InstructionMode m);

struct SuiteRouteRef {
  int town_id = 1;
  LengthClass length_class = LengthClass::Tiny;
  int index = 0;
};

struct SuiteSpec {
  std::string name;
  std::uint64_t town_seed = 0;
  InstructionMode instruction_mode = InstructionMode::PerSegment;
  std::vector<SuiteRouteRef> routes;
  std::set<int> holdout_towns;  // novel-environment suites only
};

enum class Termination { Completed, Deviated, Blocked, Timeout };
const char* to_string(Termination t);

/// Route split at its turns; each segment carries the directive active while
/// the ego drives it.
struct RouteSegment {
  double start_m = 0.0;
  double end_m = 0.0;
  TurnDirection maneuver_at_end = TurnDirection::Straight;
  Instruction directive;
};

std::vector<RouteSegment> segment_route(const Route& route);

struct TickRecord {
  long tick = 0;
  double time_s = 0.0;
  Vec2 position;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
  ControlSignal control;
  std::string command;
  bool decision = false;
  Waypoints waypoints;
  TelemetryFrame telemetry;
  std::string instruction;
  int segment = 0;
  double progress = 0.0;
  double lateral_offset_m = 0.0;
  std::vector<InfractionEvent> infractions;
};

struct SegmentTransition {
  long tick = 0;
  int from_segment = 0;
  int to_segment = 0;
  double boundary_m = 0.0;
};

struct EpisodeLog {
  std::string route_name;
  int town_id = 0;
  std::uint64_t seed = 0;
  std::string instruction;  // episode-level (long-horizon) or first directive
  std::vector<TickRecord> ticks;
  std::vector<SegmentTransition> transitions;
  Termination termination = Termination::Timeout;
  double distance_driven_m = 0.0;
  double offroad_distance_m = 0.0;
  double final_progress = 0.0;

  std::vector<InfractionEvent> all_infractions() const;
};

/// One-shot heading kick, for recovery scenarios.
struct Perturbation {
  double at_progress = 0.5;        // fraction of route arclength
  double heading_delta_rad = 0.4;  // positive = CCW
};

struct EpisodeConfig {
  double dt_s = 0.1;
  int planner_cadence = 10;  // ticks between command refreshes
  double completion_threshold = 0.99;
  double timeout_speed_fraction = 0.25;  // timeout = length / (fraction * v_max)
  SimParams sim;
  std::optional<Perturbation> perturbation;
  std::uint64_t seed = 0;
};

/// Closed-loop episode: observe -> (every K ticks) plan -> expand waypoints ->
/// track -> step, until completion, deviation, blockage, or timeout.
/// Deterministic given the seed. Throws ConfigError for K < 1 or dt <= 0.
EpisodeLog run_episode(const RouteScenario& scenario, PlannerInterface& planner,
                       ControllerInterface& controller, InstructionMode mode,
                       const EpisodeConfig& config);

/// Condense per-segment directives into one long-horizon instruction,
/// optionally weaving in environmental cues (one per directive, empty string
/// to skip). Segment boundaries are collected from the inputs' distance
/// metadata. Requires at least one instruction.
Instruction compose_long_horizon(const std::vector<Instruction>& instructions,
                                 const std::vector<std::string>& cues = {});

/// Partition towns for the novel-environment benchmark: holdout towns feed the
/// eval suite, the rest stay exportable for training. Throws ConfigError on an
/// empty or full holdout.
std::pair<std::vector<int>, SuiteSpec> split_novel_environment(
    const std::vector<int>& town_pool, const std::set<int>& holdout,
    std::uint64_t town_seed);

struct SuiteRunArtifacts {
  std::vector<EpisodeLog> logs;  // sorted by route name
};

/// Run every route in the suite. Episodes are independent; `workers` > 1 runs
/// them concurrently with results merged in route order.
SuiteRunArtifacts run_suite(const SuiteSpec& suite, const std::string& planner_name,
                            const std::string& controller_name, const EpisodeConfig& config,
                            int workers = 1);

// Suite and episode-log files.
SuiteSpec load_suite(const std::string& path);
void save_suite(const SuiteSpec& suite, const std::string& path);
void write_episode_log(const EpisodeLog& log, const Route& route,
                       const std::string& config_hash, const std::string& path);
struct LoadedEpisode {
  EpisodeLog log;
  Route route;
  std::string config_hash;
};
LoadedEpisode read_episode_log(const std::string& path);

/// Resolve a suite route reference against its (cached) generated town.
const RouteScenario& resolve_route(const SuiteSpec& suite, const SuiteRouteRef& ref);

}  // namespace middrive

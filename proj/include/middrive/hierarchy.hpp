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

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace middrive {

// ---------------------------------------------------------------------------
// Three-level action hierarchy: instruction -> mid-level command -> waypoints
// -> control. This header defines the data model and the command grammar.
// ---------------------------------------------------------------------------

/// High-level navigation directive for a route segment, or (long-horizon)
/// for a whole route.
struct Instruction {
  enum class Kind { Short, LongHorizon };

  std::string text;
  Kind kind = Kind::Short;
  /// Distance parameter for templates of the form "Upon covering [x] meters".
  std::optional<double> distance_m;
  /// Long-horizon only: route arclengths where one segment directive hands
  /// over to the next. Empty for Short instructions.
  std::vector<double> segment_boundaries_m;

  bool operator==(const Instruction&) const = default;
};

enum class PerceptionClause {
  ApproachingJunction,
  VehicleAtJunction,
  MultipleVehiclesAtJunction,
  VehicleAhead,
  MultipleVehiclesAhead,
  VehicleInLane,
  MultipleVehiclesInLane,
  BikeAhead,
  MultipleBikesAhead,
  PedestrianAhead,
  MultiplePedestriansAhead,
  RedLightAhead,
  StopSignAhead,
};
inline constexpr int kPerceptionClauseCount = 13;

enum class SpeedClause {
  SlowDown,
  StartAccelerating,
  RemainStopped,
  SignificantlyBelowTarget,
  SlightlyBelowTarget,
  AboveTarget,
  MaintainSpeed,
};
inline constexpr int kSpeedClauseCount = 7;

/// One of the five steer sub-commands or the single brake sub-command.
enum class MotionClause {
  SteerRightSharp,
  SteerRightSlight,
  SteerLeftSharp,
  SteerLeftSlight,
  SteerStraight,
  Brake,
};
inline constexpr int kMotionClauseCount = 6;

std::string_view sentence(PerceptionClause c);
std::string_view sentence(SpeedClause c);
std::string_view sentence(MotionClause c);

/// Mid-level driving command: optional perception and speed clauses followed
/// by exactly one motion clause.
struct MidLevelCommand {
  std::optional<PerceptionClause> perception;
  std::optional<SpeedClause> speed;
  MotionClause motion = MotionClause::SteerStraight;

  bool operator==(const MidLevelCommand&) const = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Clauses recognized but out of canonical perception/speed/motion order
/// (or duplicated).
struct OrderError : ParseError {
  using ParseError::ParseError;
};

/// True unless the command hits a consistency exclusion: RemainStopped may
/// only pair with SteerStraight or Brake, and Brake may not pair with an
/// acceleration-class speed clause.
bool is_valid_command(const MidLevelCommand& cmd);

/// Canonical sentence rendering: perception, speed, motion, joined by single
/// spaces. Deterministic.
std::string render_command(const MidLevelCommand& cmd);

/// Inverse of render_command. Tolerates leading/trailing whitespace and
/// repeated spaces between sentences; clause bodies are case-sensitive.
/// Throws ParseError on an unrecognized sentence or a missing motion clause,
/// OrderError on out-of-order or duplicated clauses.
MidLevelCommand parse_command(std::string_view text);

/// Every command expressible under the grammar minus the consistency
/// exclusions, in a fixed deterministic order. Size is 574.
std::vector<MidLevelCommand> enumerate_valid_commands();

// ---------------------------------------------------------------------------
// Low-level action types.
// ---------------------------------------------------------------------------

/// A position in the ego frame: x lateral (right positive), y longitudinal
/// (forward positive), meters.
struct EgoPoint {
  double lateral_m = 0.0;
  double longitudinal_m = 0.0;

  bool operator==(const EgoPoint&) const = default;
};

/// Five future ego-frame positions, the controller's output before actuation.
struct Waypoints {
  static constexpr std::size_t kCount = 5;
  std::array<EgoPoint, kCount> points{};

  bool operator==(const Waypoints&) const = default;
};

/// Longitudinal magnitudes must march forward (or stay at rest).
bool waypoints_valid(const Waypoints& wp);

/// Actuation triple. steer < 0 is left.
struct ControlSignal {
  double throttle = 0.0;  // [0, 1]
  double steer = 0.0;     // [-1, 1]
  double brake = 0.0;     // [0, 1]

  bool operator==(const ControlSignal&) const = default;
};

/// Range invariants plus throttle/brake mutual exclusion (both > 0.1 is
/// invalid).
bool control_valid(const ControlSignal& c);
ControlSignal clamp_control(ControlSignal c);

}  // namespace middrive

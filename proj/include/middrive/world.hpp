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
#include <string>
#include <vector>

#include "middrive/hierarchy.hpp"
#include "middrive/telemetry.hpp"

namespace middrive {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
double norm(Vec2 v);
double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);

/// Normalize an angle to (-pi, pi].
double wrap_angle(double rad);

// ---------------------------------------------------------------------------
// World data model
// ---------------------------------------------------------------------------

struct EgoState {
  Vec2 position;
  double heading_rad = 0.0;  // CCW from +x, normalized to (-pi, pi]
  double speed_mps = 0.0;
  double wheelbase_m = 2.8;
};

enum class ActorKind { Vehicle, Pedestrian, Bike };
enum class ActorBehavior { Stationary, ConstantVelocity, SignalCompliant, ScriptedCrossing };

struct Actor {
  int id = 0;
  ActorKind kind = ActorKind::Vehicle;
  Vec2 position;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
  ActorBehavior behavior = ActorBehavior::Stationary;
};

enum class SignalKind { TrafficLight, StopSign };
enum class LightPhase { Red, Green };

struct SignalState {
  int id = 0;
  SignalKind kind = SignalKind::TrafficLight;
  Vec2 position;
  std::optional<LightPhase> phase;  // lights only
  double cycle_s = 15.0;
  /// Stop signs: latched once the ego has come to a stop at the sign.
  bool satisfied = false;
};

struct Route {
  std::vector<Vec2> polyline;
  std::vector<double> cumulative_m;  // same size as polyline, [0] = 0
  double length_m = 0.0;
  int town_id = 0;
  std::string name;

  std::vector<double> junctions_m;  // arclengths of junctions along the route

  struct Turn {
    double arclength_m = 0.0;
    TurnDirection direction = TurnDirection::Straight;
    double angle_rad = 0.0;
  };
  std::vector<Turn> turns;

  struct Landmark {
    double arclength_m = 0.0;
    std::string tag;
  };
  std::vector<Landmark> landmarks;

  Vec2 point_at(double s) const;
  double tangent_heading_at(double s) const;

  struct Projection {
    double arclength_m = 0.0;
    double lateral_m = 0.0;  // unsigned distance
    double signed_lateral_m = 0.0;  // > 0 when the point is right of the tangent
  };
  Projection project(Vec2 p) const;
  /// Projection restricted to a window around an arclength hint; keeps
  /// progress from jumping across self-crossing routes.
  Projection project_near(Vec2 p, double s_hint, double back_m, double forward_m) const;
};

/// Rebuild cumulative arclengths from the polyline and return total length.
double finalize_route_polyline(Route& route);

enum class InfractionKind {
  VehicleCollision,
  PedestrianCollision,
  LayoutCollision,
  RedLightViolation,
  OffroadInfraction,
  StopSignViolation,
  RouteDeviation,
  Blocked,
};

const char* to_string(InfractionKind k);

struct InfractionEvent {
  long tick = 0;
  InfractionKind kind = InfractionKind::VehicleCollision;
  Vec2 position;
  int actor_id = -1;  // colliding actor or signal, -1 otherwise
};

/// Physics and detection constants. All thresholds quoted at dt = 0.1 s.
struct SimParams {
  double dt_s = 0.1;
  double accel_max_mps2 = 3.0;
  double brake_max_mps2 = 8.0;
  double drag_per_s = 0.1;
  double speed_max_mps = 12.0;
  double steer_max_rad = 0.6;
  double target_speed_mps = 6.0;

  double deviation_fail_m = 30.0;
  double blocked_timeout_s = 60.0;
  double corridor_halfwidth_m = 3.5;

  double ego_radius_m = 1.2;
  double vehicle_radius_m = 1.2;
  double pedestrian_radius_m = 0.4;
  double bike_radius_m = 0.8;
  double signal_pole_radius_m = 0.3;

  double sensing_range_m = 40.0;
  double sensing_half_angle_rad = 1.0471975511965976;  // 60 deg
  double signal_range_m = 35.0;
  double junction_report_m = 60.0;
  double junction_actor_radius_m = 12.0;
  double stop_sign_satisfy_m = 15.0;
  double stop_sign_satisfy_speed = 0.3;
  double stop_sign_cross_window_s = 6.0;
  double stopped_speed_mps = 0.1;
};

struct WorldState {
  long tick = 0;
  double time_s = 0.0;
  EgoState ego;
  std::vector<Actor> actors;
  std::vector<SignalState> signals;
  Route route;
  std::uint64_t rng_seed = 0;

  // Bookkeeping carried across ticks; stepping stays a pure function of state.
  ControlSignal last_control;
  double progress_m = 0.0;        // monotone high-water arclength
  double lateral_offset_m = 0.0;  // signed, at the latest projection
  double stopped_since_s = -1.0;  // -1 while moving
  double last_stop_time_s = -1e9;
  double offroad_distance_m = 0.0;
};

/// Place the ego at the route start and seed progress bookkeeping.
WorldState make_world(Route route, std::vector<Actor> actors,
                      std::vector<SignalState> signals, std::uint64_t rng_seed);

/// Advance the world one fixed step under the kinematic bicycle model.
/// Deterministic: identical inputs yield bit-identical outputs.
WorldState step(const WorldState& state, const ControlSignal& control, double dt,
                const SimParams& params = {});

/// Structured observation for the planner.
TelemetryFrame observe(const WorldState& state, const Instruction& instruction,
                       const SimParams& params = {});

/// Events that began on the transition prev -> next (continuing conditions do
/// not re-emit). Output is sorted, independent of actor list order.
std::vector<InfractionEvent> detect_infractions(const WorldState& prev,
                                                const WorldState& next,
                                                const SimParams& params = {});

/// (completion fraction in [0,1], unsigned lateral offset). Completion is
/// monotone non-decreasing across an episode.
std::pair<double, double> route_progress(const WorldState& state);

}  // namespace middrive

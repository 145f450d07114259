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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "middrive/hierarchy.hpp"
#include "middrive/telemetry.hpp"
#include "middrive/world.hpp"

namespace middrive {

/// Longitudinal PID memory, reset at episode start.
struct ControllerState {
  double integral_error = 0.0;
  double prev_error = 0.0;
};

struct ControllerConfig {
  double waypoint_spacing_s = 0.5;  // travel time between consecutive waypoints
  double slight_curvature = 0.08;   // 1/m
  double sharp_curvature = 0.25;    // 1/m
  double reduced_speed_factor = 0.6;

  // Comfort envelope for curved plans; also clamps the arc short of the
  // quarter turn so the five points keep marching forward.
  double lateral_accel_max = 2.5;  // m/s^2
  double max_arc_angle_rad = 1.49;

  double kp = 0.8;
  double ki = 0.05;
  double kd = 0.1;
  double integral_clamp = 2.0;
  double integral_leak_per_s = 1.0;

  double lookahead_min_m = 4.0;
  double lookahead_gain_s = 1.2;
  double steer_max_rad = 0.6;  // matches the world's delta_max

  // Centerline re-alignment nudge applied to waypoint lateral coordinates.
  double centerline_blend_max_m = 1.5;
};

/// Deterministic expansion of a mid-level command into 5 ego-frame waypoints
/// along a constant-curvature arc, blended toward the route centerline.
Waypoints command_to_waypoints(const TelemetryFrame& frame, const Instruction& instruction,
                               const MidLevelCommand& cmd, const ControllerConfig& cfg = {});

/// PID speed tracking plus pure-pursuit steering on the waypoint at the
/// lookahead distance.
std::pair<ControlSignal, ControllerState> track_waypoints(const EgoState& ego,
                                                          const Waypoints& wp,
                                                          ControllerState state, double dt,
                                                          const ControllerConfig& cfg = {});

/// Mean absolute coordinate difference over all 10 scalars, meters.
double waypoint_l1_error(const Waypoints& pred, const Waypoints& truth);

/// Pluggable controller surface: produces the waypoint plan; tracking is
/// shared machinery.
class ControllerInterface {
 public:
  virtual ~ControllerInterface() = default;
  virtual Waypoints plan_waypoints(const TelemetryFrame& frame,
                                   const Instruction& instruction,
                                   const MidLevelCommand& cmd) = 0;
  virtual std::string name() const = 0;
};

class WaypointController final : public ControllerInterface {
 public:
  explicit WaypointController(ControllerConfig cfg = {}) : cfg_(cfg) {}
  Waypoints plan_waypoints(const TelemetryFrame& frame, const Instruction& instruction,
                           const MidLevelCommand& cmd) override {
    return command_to_waypoints(frame, instruction, cmd, cfg_);
  }
  std::string name() const override { return "waypoint"; }
  const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerConfig cfg_;
};

/// Replays a recorded waypoint sequence; used for offline L1 evaluation.
class ReplayController final : public ControllerInterface {
 public:
  explicit ReplayController(std::vector<Waypoints> recorded)
      : recorded_(std::move(recorded)) {}
  Waypoints plan_waypoints(const TelemetryFrame&, const Instruction&,
                           const MidLevelCommand&) override {
    if (recorded_.empty()) return {};
    const Waypoints wp = recorded_[std::min(cursor_, recorded_.size() - 1)];
    ++cursor_;
    return wp;
  }
  std::string name() const override { return "replay"; }

 private:
  std::vector<Waypoints> recorded_;
  std::size_t cursor_ = 0;
};

std::unique_ptr<ControllerInterface> make_controller(const std::string& name);

}  // namespace middrive

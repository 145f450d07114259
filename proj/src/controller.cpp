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

#include "middrive/controller.hpp"

#include <algorithm>
#include <cmath>

namespace middrive {

namespace {

/// Geometric curvature of the commanded motion, 1/m. Positive bends right
/// (ego-frame x is right-positive).
double command_curvature(MotionClause motion, const ControllerConfig& cfg) {
  switch (motion) {
    case MotionClause::SteerRightSharp: return cfg.sharp_curvature;
    case MotionClause::SteerRightSlight: return cfg.slight_curvature;
    case MotionClause::SteerLeftSharp: return -cfg.sharp_curvature;
    case MotionClause::SteerLeftSlight: return -cfg.slight_curvature;
    case MotionClause::SteerStraight:
    case MotionClause::Brake: return 0.0;
  }
  return 0.0;
}

double command_target_speed(const MidLevelCommand& cmd, const TelemetryFrame& frame,
                            const ControllerConfig& cfg) {
  if (cmd.motion == MotionClause::Brake) return 0.0;
  if (!cmd.speed) return frame.target_speed_mps;
  switch (*cmd.speed) {
    case SpeedClause::RemainStopped: return 0.0;
    case SpeedClause::SlowDown:
    case SpeedClause::AboveTarget: return cfg.reduced_speed_factor * frame.target_speed_mps;
    case SpeedClause::StartAccelerating:
    case SpeedClause::SignificantlyBelowTarget:
    case SpeedClause::SlightlyBelowTarget: return frame.target_speed_mps;
    case SpeedClause::MaintainSpeed: return frame.speed_mps;
  }
  return frame.target_speed_mps;
}

}  // namespace

Waypoints command_to_waypoints(const TelemetryFrame& frame, const Instruction&,
                               const MidLevelCommand& cmd, const ControllerConfig& cfg) {
  Waypoints wp;

  const double kappa = command_curvature(cmd.motion, cfg);
  double v = command_target_speed(cmd, frame, cfg);
  if (v <= 0.0) return wp;  // all points at rest

  // Slow into curves: v^2 * kappa <= lateral_accel_max.
  if (kappa != 0.0) {
    v = std::min(v, std::sqrt(cfg.lateral_accel_max / std::abs(kappa)));
  }

  const double step = v * cfg.waypoint_spacing_s;
  for (std::size_t i = 0; i < Waypoints::kCount; ++i) {
    const double s = step * static_cast<double>(i + 1);
    EgoPoint& p = wp.points[i];
    if (kappa == 0.0) {
      p.lateral_m = 0.0;
      p.longitudinal_m = s;
    } else {
      // Clamp the sweep short of a quarter turn; trailing points may come to
      // rest on the arc but never fold back.
      const double angle =
          std::min(std::abs(kappa) * s, cfg.max_arc_angle_rad) * (kappa > 0.0 ? 1.0 : -1.0);
      p.longitudinal_m = std::sin(angle) / kappa;
      p.lateral_m = (1.0 - std::cos(angle)) / kappa;
    }
    // Bounded nudge toward the route centerline.
    const double ramp = std::min(1.0, s / std::max(step * 2.0, 1e-9));
    const double correction =
        std::clamp(-frame.lateral_offset_m, -cfg.centerline_blend_max_m,
                   cfg.centerline_blend_max_m);
    p.lateral_m += ramp * correction;
  }
  return wp;
}

std::pair<ControlSignal, ControllerState> track_waypoints(const EgoState& ego,
                                                          const Waypoints& wp,
                                                          ControllerState state, double dt,
                                                          const ControllerConfig& cfg) {
  ControlSignal out;

  // Longitudinal: desired speed from the leading waypoint gap.
  const EgoPoint& p0 = wp.points[0];
  const EgoPoint& p1 = wp.points[1];
  const double gap = std::hypot(p1.lateral_m - p0.lateral_m,
                                p1.longitudinal_m - p0.longitudinal_m);
  const double desired = gap / cfg.waypoint_spacing_s;
  const double error = desired - ego.speed_mps;

  state.integral_error += error * dt;
  state.integral_error -= cfg.integral_leak_per_s * state.integral_error * dt;
  state.integral_error =
      std::clamp(state.integral_error, -cfg.integral_clamp, cfg.integral_clamp);
  const double derivative = (error - state.prev_error) / dt;
  const double u = cfg.kp * error + cfg.ki * state.integral_error + cfg.kd * derivative;
  state.prev_error = error;

  if (u >= 0.0) {
    out.throttle = std::clamp(u, 0.0, 1.0);
  } else {
    out.brake = std::clamp(-u, 0.0, 1.0);
  }

  // Lateral: pure pursuit on the waypoint at the lookahead distance.
  const double lookahead =
      std::max(cfg.lookahead_min_m, cfg.lookahead_gain_s * ego.speed_mps);
  EgoPoint target = wp.points.back();
  for (const EgoPoint& p : wp.points) {
    if (std::hypot(p.lateral_m, p.longitudinal_m) >= lookahead) {
      target = p;
      break;
    }
  }
  const double dist = std::hypot(target.lateral_m, target.longitudinal_m);
  if (dist > 0.05) {
    const double alpha = std::atan2(target.lateral_m, target.longitudinal_m);
    const double steer_angle =
        std::atan2(2.0 * ego.wheelbase_m * std::sin(alpha), lookahead);
    out.steer = std::clamp(steer_angle / cfg.steer_max_rad, -1.0, 1.0);
  }

  return {clamp_control(out), state};
}

double waypoint_l1_error(const Waypoints& pred, const Waypoints& truth) {
  double sum = 0.0;
  for (std::size_t i = 0; i < Waypoints::kCount; ++i) {
    sum += std::abs(pred.points[i].lateral_m - truth.points[i].lateral_m);
    sum += std::abs(pred.points[i].longitudinal_m - truth.points[i].longitudinal_m);
  }
  return sum / (2.0 * static_cast<double>(Waypoints::kCount));
}

std::unique_ptr<ControllerInterface> make_controller(const std::string& name) {
  if (name == "waypoint") return std::make_unique<WaypointController>();
  return nullptr;
}

}  // namespace middrive

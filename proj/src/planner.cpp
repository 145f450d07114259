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

#include "middrive/planner.hpp"

#include <cmath>

namespace middrive {

namespace {

bool red_light_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  if (!f.red_light_ahead) return false;
  const double engage =
      std::max(cfg.red_light_engage_min_m, cfg.braking_distance_m(f.speed_mps));
  return f.red_light_distance_m <= engage;
}

bool stop_sign_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  // A handled sign is reported as absent, so the flag alone gates re-engagement.
  if (!f.stop_sign_ahead) return false;
  const double engage =
      std::max(cfg.stop_sign_engage_min_m, cfg.braking_distance_m(f.speed_mps));
  return f.stop_sign_distance_m <= engage;
}

bool pedestrian_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  return f.nearest_pedestrian_m && *f.nearest_pedestrian_m <= cfg.pedestrian_stop_m;
}

bool lead_gap_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  return f.lead_vehicle_gap_m && *f.lead_vehicle_gap_m <= cfg.lead_gap_stop_m;
}

bool stop_class_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  return red_light_hazard(f, cfg) || stop_sign_hazard(f, cfg) ||
         pedestrian_hazard(f, cfg) || lead_gap_hazard(f, cfg);
}

// Hazards that warrant slowing down even before the braking envelope.
bool slow_down_hazard(const TelemetryFrame& f, const PlannerConfig& cfg) {
  return f.red_light_ahead || pedestrian_hazard(f, cfg) || lead_gap_hazard(f, cfg);
}

/// Desired-curvature proxy: heading error plus an anticipation term for the
/// upcoming turn. Positive means steer left.
double steer_proxy(const TelemetryFrame& f, const PlannerConfig& cfg) {
  double kappa = cfg.heading_gain * f.heading_error_rad;
  if (f.next_turn != TurnDirection::Straight &&
      f.next_turn_distance_m < cfg.turn_anticipate_m) {
    const double ramp = 1.0 - f.next_turn_distance_m / cfg.turn_anticipate_m;
    const double sign = f.next_turn == TurnDirection::Left ? 1.0 : -1.0;
    kappa += sign * cfg.turn_feedforward_gain * ramp;
  }
  return kappa;
}

}  // namespace

std::optional<PerceptionClause> perception_clause(const TelemetryFrame& f,
                                                  const PlannerConfig& cfg) {
  if (f.red_light_ahead) return PerceptionClause::RedLightAhead;
  if (f.stop_sign_ahead) return PerceptionClause::StopSignAhead;
  if (f.pedestrians_ahead >= 2) return PerceptionClause::MultiplePedestriansAhead;
  if (f.pedestrians_ahead == 1) return PerceptionClause::PedestrianAhead;
  if (f.bikes_ahead >= 2) return PerceptionClause::MultipleBikesAhead;
  if (f.bikes_ahead == 1) return PerceptionClause::BikeAhead;
  if (f.vehicles_ahead >= 2) return PerceptionClause::MultipleVehiclesAhead;
  if (f.vehicles_ahead == 1) return PerceptionClause::VehicleAhead;
  if (f.vehicles_at_junction >= 2) return PerceptionClause::MultipleVehiclesAtJunction;
  if (f.vehicles_at_junction == 1) return PerceptionClause::VehicleAtJunction;
  if (f.vehicles_in_lane >= 2) return PerceptionClause::MultipleVehiclesInLane;
  if (f.vehicles_in_lane == 1) return PerceptionClause::VehicleInLane;
  if (f.junction_distance_m && *f.junction_distance_m <= cfg.junction_alert_m)
    return PerceptionClause::ApproachingJunction;
  return std::nullopt;
}

std::optional<SpeedClause> speed_clause(const TelemetryFrame& f, const PlannerConfig& cfg) {
  if (f.target_speed_mps <= 0.0) return std::nullopt;
  if (f.speed_mps < cfg.stopped_speed_mps) {
    return f.applied_brake > cfg.brake_applied_min ? SpeedClause::RemainStopped
                                                   : SpeedClause::StartAccelerating;
  }
  const double r = f.speed_mps / f.target_speed_mps;
  if (slow_down_hazard(f, cfg) && r >= cfg.significantly_below_ratio)
    return SpeedClause::SlowDown;
  if (r < cfg.significantly_below_ratio) return SpeedClause::SignificantlyBelowTarget;
  if (r < cfg.slightly_below_ratio) return SpeedClause::SlightlyBelowTarget;
  if (r > cfg.above_ratio) return SpeedClause::AboveTarget;
  return SpeedClause::MaintainSpeed;
}

MotionClause motion_clause(const TelemetryFrame& f, const Instruction&,
                           const PlannerConfig& cfg) {
  if (stop_class_hazard(f, cfg)) return MotionClause::Brake;

  const double kappa = steer_proxy(f, cfg);
  const double mag = std::abs(kappa);
  if (mag < cfg.steer_straight_band) return MotionClause::SteerStraight;
  const bool left = kappa > 0.0;
  if (mag < cfg.steer_sharp_band)
    return left ? MotionClause::SteerLeftSlight : MotionClause::SteerRightSlight;
  return left ? MotionClause::SteerLeftSharp : MotionClause::SteerRightSharp;
}

MidLevelCommand plan(const TelemetryFrame& frame, const Instruction& instruction,
                     const PlannerConfig& cfg) {
  MidLevelCommand cmd;
  cmd.perception = perception_clause(frame, cfg);
  cmd.speed = speed_clause(frame, cfg);
  cmd.motion = motion_clause(frame, instruction, cfg);

  // Reconcile physically contradictory pairings the grammar excludes.
  if (cmd.motion == MotionClause::Brake && cmd.speed &&
      (*cmd.speed == SpeedClause::StartAccelerating ||
       *cmd.speed == SpeedClause::SignificantlyBelowTarget ||
       *cmd.speed == SpeedClause::SlightlyBelowTarget)) {
    cmd.speed = SpeedClause::SlowDown;
  }
  if (cmd.speed == SpeedClause::RemainStopped && cmd.motion != MotionClause::Brake) {
    cmd.motion = MotionClause::SteerStraight;
  }
  return cmd;
}

std::unique_ptr<PlannerInterface> make_planner(const std::string& name) {
  if (name == "rules") return std::make_unique<RulePlanner>();
  if (name == "frozen-straight") return std::make_unique<FrozenCommandPlanner>();
  return nullptr;
}

}  // namespace middrive

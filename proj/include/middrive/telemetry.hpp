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

#include <optional>

namespace middrive {

enum class TurnDirection { Straight, Left, Right };

/// Structured per-tick observation of the ego vehicle and its surroundings.
/// Stands in for camera input: everything the rule engine needs to pick a
/// mid-level command.
struct TelemetryFrame {
  double speed_mps = 0.0;
  double target_speed_mps = 0.0;
  double applied_steer = 0.0;  // [-1, 1], control applied on the previous tick
  double applied_brake = 0.0;  // [0, 1]

  std::optional<double> junction_distance_m;  // next junction along the route

  // Counts of actors sensed ahead (cone / junction / lane buckets overlap).
  int vehicles_ahead = 0;
  int vehicles_at_junction = 0;
  int vehicles_in_lane = 0;
  int bikes_ahead = 0;
  int pedestrians_ahead = 0;

  bool red_light_ahead = false;
  double red_light_distance_m = 0.0;
  bool stop_sign_ahead = false;
  double stop_sign_distance_m = 0.0;

  // Nearest on-corridor hazards; absent when nothing blocks the driving path.
  std::optional<double> nearest_pedestrian_m;
  std::optional<double> lead_vehicle_gap_m;

  double lateral_offset_m = 0.0;   // signed, > 0 when ego is right of the route
  double heading_error_rad = 0.0;  // route tangent minus ego heading, > 0 = route to the left

  TurnDirection next_turn = TurnDirection::Straight;
  double next_turn_distance_m = 0.0;

  bool operator==(const TelemetryFrame&) const = default;
};

}  // namespace middrive

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
#include <optional>
#include <string>

#include "middrive/hierarchy.hpp"
#include "middrive/telemetry.hpp"

namespace middrive {

/// Thresholds of the rule engine. Every number that shapes a clause decision
/// lives here so experiments can vary it.
struct PlannerConfig {
  // speed / target ratio bands
  double stopped_speed_mps = 0.1;
  double significantly_below_ratio = 0.5;
  double slightly_below_ratio = 0.9;
  double above_ratio = 1.1;
  double brake_applied_min = 0.05;

  // steer bands on the desired-curvature proxy
  double steer_straight_band = 0.05;
  double steer_sharp_band = 0.35;

  // hazard engagement
  double pedestrian_stop_m = 15.0;
  double lead_gap_stop_m = 8.0;
  double red_light_engage_min_m = 15.0;
  double stop_sign_engage_min_m = 12.0;
  double braking_decel_mps2 = 8.0;  // matches the world's b_max
  double braking_margin_m = 5.0;

  // perception
  double junction_alert_m = 20.0;

  // turn anticipation feeding the steer proxy
  double turn_anticipate_m = 15.0;
  double turn_feedforward_gain = 0.35;
  double heading_gain = 1.0;

  /// Distance needed to stop from `speed`, with margin.
  double braking_distance_m(double speed) const {
    return speed * speed / (2.0 * braking_decel_mps2) + braking_margin_m;
  }
};

std::optional<PerceptionClause> perception_clause(const TelemetryFrame& frame,
                                                  const PlannerConfig& cfg = {});
std::optional<SpeedClause> speed_clause(const TelemetryFrame& frame,
                                        const PlannerConfig& cfg = {});
MotionClause motion_clause(const TelemetryFrame& frame, const Instruction& instruction,
                           const PlannerConfig& cfg = {});

/// Rule-based reference planner: assembles the three clauses into a valid
/// MidLevelCommand. Pure and stateless; the same engine labels recorded logs
/// offline.
MidLevelCommand plan(const TelemetryFrame& frame, const Instruction& instruction,
                     const PlannerConfig& cfg = {});

/// Pluggable planner surface: anything mapping (frame, instruction) to a
/// mid-level command may drive an episode.
class PlannerInterface {
 public:
  virtual ~PlannerInterface() = default;
  virtual MidLevelCommand plan(const TelemetryFrame& frame,
                               const Instruction& instruction) = 0;
  virtual std::string name() const = 0;
};

class RulePlanner final : public PlannerInterface {
 public:
  explicit RulePlanner(PlannerConfig cfg = {}) : cfg_(cfg) {}
  MidLevelCommand plan(const TelemetryFrame& frame, const Instruction& instruction) override {
    return middrive::plan(frame, instruction, cfg_);
  }
  std::string name() const override { return "rules"; }

 private:
  PlannerConfig cfg_;
};

/// Baseline stub that ignores observations and always emits the same command.
class FrozenCommandPlanner final : public PlannerInterface {
 public:
  explicit FrozenCommandPlanner(MidLevelCommand cmd = {}) : cmd_(cmd) {}
  MidLevelCommand plan(const TelemetryFrame&, const Instruction&) override { return cmd_; }
  std::string name() const override { return "frozen-straight"; }

 private:
  MidLevelCommand cmd_;
};

/// Factory for the CLI's --planner flag. Returns nullptr for unknown names.
std::unique_ptr<PlannerInterface> make_planner(const std::string& name);

}  // namespace middrive

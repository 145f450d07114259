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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "middrive/planner.hpp"

using namespace middrive;

namespace {

struct TestRng {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  int count(int max) { return static_cast<int>(next() % static_cast<std::uint64_t>(max + 1)); }
};

TelemetryFrame random_frame(TestRng& rng) {
  TelemetryFrame f;
  f.target_speed_mps = 6.0;
  f.speed_mps = rng.uniform(0.0, 9.0);
  f.applied_brake = rng.chance(0.3) ? rng.uniform(0.0, 1.0) : 0.0;
  f.applied_steer = rng.uniform(-1.0, 1.0);
  if (rng.chance(0.4)) f.junction_distance_m = rng.uniform(0.0, 60.0);
  f.vehicles_ahead = rng.count(3);
  f.vehicles_at_junction = rng.count(2);
  f.vehicles_in_lane = rng.count(2);
  f.bikes_ahead = rng.count(2);
  f.pedestrians_ahead = rng.count(3);
  f.red_light_ahead = rng.chance(0.25);
  f.red_light_distance_m = rng.uniform(0.0, 35.0);
  f.stop_sign_ahead = rng.chance(0.2);
  f.stop_sign_distance_m = rng.uniform(0.0, 35.0);
  if (rng.chance(0.3)) f.nearest_pedestrian_m = rng.uniform(1.0, 40.0);
  if (rng.chance(0.3)) f.lead_vehicle_gap_m = rng.uniform(1.0, 40.0);
  f.lateral_offset_m = rng.uniform(-3.0, 3.0);
  f.heading_error_rad = rng.uniform(-0.8, 0.8);
  const int turn = rng.count(2);
  f.next_turn = turn == 0 ? TurnDirection::Straight
                          : (turn == 1 ? TurnDirection::Left : TurnDirection::Right);
  f.next_turn_distance_m = rng.uniform(0.0, 80.0);
  return f;
}

// Independent decision-table oracle, written straight from the threshold
// table with fresh logic.
bool oracle_slowdown_hazard(const TelemetryFrame& f) {
  if (f.red_light_ahead) return true;
  if (f.nearest_pedestrian_m && *f.nearest_pedestrian_m <= 15.0) return true;
  if (f.lead_vehicle_gap_m && *f.lead_vehicle_gap_m <= 8.0) return true;
  return false;
}

std::optional<SpeedClause> oracle_speed_clause(const TelemetryFrame& f) {
  if (f.target_speed_mps <= 0.0) return std::nullopt;
  if (f.speed_mps < 0.1)
    return f.applied_brake > 0.05 ? SpeedClause::RemainStopped : SpeedClause::StartAccelerating;
  const double r = f.speed_mps / f.target_speed_mps;
  if (oracle_slowdown_hazard(f) && r >= 0.5) return SpeedClause::SlowDown;
  if (r < 0.5) return SpeedClause::SignificantlyBelowTarget;
  if (r < 0.9) return SpeedClause::SlightlyBelowTarget;
  if (r > 1.1) return SpeedClause::AboveTarget;
  return SpeedClause::MaintainSpeed;
}

bool oracle_stop_hazard(const TelemetryFrame& f) {
  const double bd = f.speed_mps * f.speed_mps / 16.0 + 5.0;
  if (f.red_light_ahead && f.red_light_distance_m <= std::max(15.0, bd)) return true;
  if (f.stop_sign_ahead && f.stop_sign_distance_m <= std::max(12.0, bd)) return true;
  if (f.nearest_pedestrian_m && *f.nearest_pedestrian_m <= 15.0) return true;
  if (f.lead_vehicle_gap_m && *f.lead_vehicle_gap_m <= 8.0) return true;
  return false;
}

MotionClause oracle_motion_clause(const TelemetryFrame& f) {
  if (oracle_stop_hazard(f)) return MotionClause::Brake;
  double kappa = f.heading_error_rad;
  if (f.next_turn != TurnDirection::Straight && f.next_turn_distance_m < 15.0) {
    const double ff = 0.35 * (1.0 - f.next_turn_distance_m / 15.0);
    kappa += f.next_turn == TurnDirection::Left ? ff : -ff;
  }
  if (std::abs(kappa) < 0.05) return MotionClause::SteerStraight;
  if (std::abs(kappa) < 0.35)
    return kappa > 0.0 ? MotionClause::SteerLeftSlight : MotionClause::SteerRightSlight;
  return kappa > 0.0 ? MotionClause::SteerLeftSharp : MotionClause::SteerRightSharp;
}

}  // namespace

TEST_CASE("perception clause priority order") {
  TelemetryFrame f;
  f.target_speed_mps = 6.0;

  SUBCASE("nothing applies") { CHECK(!perception_clause(f).has_value()); }

  SUBCASE("red light beats everything") {
    f.red_light_ahead = true;
    f.stop_sign_ahead = true;
    f.pedestrians_ahead = 3;
    f.vehicles_ahead = 2;
    CHECK(perception_clause(f) == PerceptionClause::RedLightAhead);
  }

  SUBCASE("stop sign next") {
    f.stop_sign_ahead = true;
    f.pedestrians_ahead = 2;
    CHECK(perception_clause(f) == PerceptionClause::StopSignAhead);
  }

  SUBCASE("counts pick singular or multiple") {
    f.pedestrians_ahead = 2;
    CHECK(perception_clause(f) == PerceptionClause::MultiplePedestriansAhead);
    f.pedestrians_ahead = 1;
    CHECK(perception_clause(f) == PerceptionClause::PedestrianAhead);
    f.pedestrians_ahead = 0;
    f.bikes_ahead = 2;
    CHECK(perception_clause(f) == PerceptionClause::MultipleBikesAhead);
    f.bikes_ahead = 0;
    f.vehicles_ahead = 1;
    CHECK(perception_clause(f) == PerceptionClause::VehicleAhead);
    f.vehicles_ahead = 0;
    f.vehicles_at_junction = 2;
    CHECK(perception_clause(f) == PerceptionClause::MultipleVehiclesAtJunction);
    f.vehicles_at_junction = 0;
    f.vehicles_in_lane = 1;
    CHECK(perception_clause(f) == PerceptionClause::VehicleInLane);
  }

  SUBCASE("junction proximity is the weakest clause") {
    f.junction_distance_m = 12.0;
    CHECK(perception_clause(f) == PerceptionClause::ApproachingJunction);
    f.junction_distance_m = 25.0;
    CHECK(!perception_clause(f).has_value());
  }
}

TEST_CASE("speed clause examples") {
  TelemetryFrame f;
  f.target_speed_mps = 6.0;

  f.speed_mps = 0.0;
  f.applied_brake = 0.3;
  CHECK(speed_clause(f) == SpeedClause::RemainStopped);

  f.applied_brake = 0.0;
  CHECK(speed_clause(f) == SpeedClause::StartAccelerating);

  f.speed_mps = 6.0;
  CHECK(speed_clause(f) == SpeedClause::MaintainSpeed);

  f.speed_mps = 0.45 * 6.0;
  CHECK(speed_clause(f) == SpeedClause::SignificantlyBelowTarget);

  f.speed_mps = 0.8 * 6.0;
  CHECK(speed_clause(f) == SpeedClause::SlightlyBelowTarget);

  f.speed_mps = 1.2 * 6.0;
  CHECK(speed_clause(f) == SpeedClause::AboveTarget);

  // Hazard overrides the band once r >= 0.5.
  f.speed_mps = 5.0;
  f.red_light_ahead = true;
  f.red_light_distance_m = 30.0;
  CHECK(speed_clause(f) == SpeedClause::SlowDown);
}

TEST_CASE("motion clause examples") {
  TelemetryFrame f;
  f.target_speed_mps = 6.0;
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};

  SUBCASE("straight") {
    CHECK(motion_clause(f, instr) == MotionClause::SteerStraight);
  }
  SUBCASE("heading error steers toward the route") {
    f.heading_error_rad = 0.2;
    CHECK(motion_clause(f, instr) == MotionClause::SteerLeftSlight);
    f.heading_error_rad = -0.2;
    CHECK(motion_clause(f, instr) == MotionClause::SteerRightSlight);
    f.heading_error_rad = 0.5;
    CHECK(motion_clause(f, instr) == MotionClause::SteerLeftSharp);
  }
  SUBCASE("red light within braking distance brakes") {
    f.speed_mps = 6.0;
    f.red_light_ahead = true;
    f.red_light_distance_m = 10.0;
    CHECK(motion_clause(f, instr) == MotionClause::Brake);
  }
  SUBCASE("upcoming turn anticipated") {
    f.next_turn = TurnDirection::Left;
    f.next_turn_distance_m = 8.0;
    CHECK(motion_clause(f, instr) == MotionClause::SteerLeftSlight);
  }
}

TEST_CASE("plan assembles valid commands that mirror the worked examples") {
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};

  TelemetryFrame red;
  red.target_speed_mps = 6.0;
  red.speed_mps = 6.0;
  red.red_light_ahead = true;
  red.red_light_distance_m = 15.0;
  const MidLevelCommand at_red = plan(red, instr);
  CHECK(at_red.perception == PerceptionClause::RedLightAhead);
  CHECK(at_red.motion == MotionClause::Brake);
  const std::string rendered = render_command(at_red);
  CHECK(rendered.find("There is a red light ahead.") == 0);
  CHECK(rendered.find("Apply brakes safely.") != std::string::npos);

  TelemetryFrame turning;
  turning.target_speed_mps = 6.0;
  turning.speed_mps = 0.8 * 6.0;
  turning.next_turn = TurnDirection::Left;
  turning.next_turn_distance_m = 8.0;
  const MidLevelCommand before_turn = plan(turning, instr);
  CHECK(before_turn.speed == SpeedClause::SlightlyBelowTarget);
  CHECK(before_turn.motion == MotionClause::SteerLeftSlight);

  TelemetryFrame cruising;
  cruising.target_speed_mps = 6.0;
  cruising.speed_mps = 6.0;
  const MidLevelCommand cruise = plan(cruising, instr);
  CHECK(cruise.speed == SpeedClause::MaintainSpeed);
  CHECK(cruise.motion == MotionClause::SteerStraight);
  CHECK(!cruise.perception.has_value());
}

TEST_CASE("clause rules match the independent decision-table oracle") {
  TestRng rng{20260810ULL};
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};
  for (int i = 0; i < 5000; ++i) {
    const TelemetryFrame f = random_frame(rng);
    CHECK(speed_clause(f) == oracle_speed_clause(f));
    CHECK(motion_clause(f, instr) == oracle_motion_clause(f));
  }
}

TEST_CASE("plan is pure and closed over the grammar") {
  TestRng rng{77ULL};
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};

  std::set<std::string> valid;
  for (const MidLevelCommand& c : enumerate_valid_commands()) valid.insert(render_command(c));

  for (int i = 0; i < 5000; ++i) {
    const TelemetryFrame f = random_frame(rng);
    const MidLevelCommand cmd = plan(f, instr);
    CHECK(plan(f, instr) == cmd);  // purity
    CHECK(is_valid_command(cmd));
    CHECK(valid.count(render_command(cmd)) == 1);
  }
}

TEST_CASE("hazard dominance: red light within braking distance forces Brake") {
  TestRng rng{99ULL};
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};
  PlannerConfig cfg;
  for (int i = 0; i < 5000; ++i) {
    TelemetryFrame f = random_frame(rng);
    f.red_light_ahead = true;
    f.red_light_distance_m =
        rng.uniform(0.0, cfg.braking_distance_m(f.speed_mps));
    CHECK(plan(f, instr).motion == MotionClause::Brake);
  }
}

TEST_CASE("self-correction: large heading error steers toward the route") {
  TestRng rng{123ULL};
  const Instruction instr{"drive", Instruction::Kind::Short, {}, {}};
  for (int i = 0; i < 5000; ++i) {
    TelemetryFrame f = random_frame(rng);
    // moving, no hazards, no imminent turn
    f.speed_mps = rng.uniform(1.0, 9.0);
    f.red_light_ahead = false;
    f.stop_sign_ahead = false;
    f.nearest_pedestrian_m.reset();
    f.lead_vehicle_gap_m.reset();
    f.next_turn = TurnDirection::Straight;
    const double err = rng.uniform(0.16, 0.8) * (rng.chance(0.5) ? 1.0 : -1.0);
    f.heading_error_rad = err;
    const MotionClause m = plan(f, instr).motion;
    CHECK(m != MotionClause::SteerStraight);
    if (err > 0.0) {
      CHECK((m == MotionClause::SteerLeftSlight || m == MotionClause::SteerLeftSharp));
    } else {
      CHECK((m == MotionClause::SteerRightSlight || m == MotionClause::SteerRightSharp));
    }
  }
}

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

#include <set>

#include "middrive/hierarchy.hpp"

using namespace middrive;

namespace {

// Independent enumeration oracle: raw cross product filtered by the two
// consistency rules, written without touching the grammar module internals.
int oracle_valid_count() {
  int count = 0;
  for (int p = 0; p <= 13; ++p) {      // 0 = none, 1..13 perception variants
    for (int s = 0; s <= 7; ++s) {     // 0 = none, 1..7 speed variants
      for (int m = 0; m < 6; ++m) {    // 6 motion variants
        const bool speed_is_remain_stopped = s == 3;  // enum order: third speed row
        const bool motion_is_turn = m != 4 && m != 5; // not straight, not brake
        const bool motion_is_brake = m == 5;
        const bool speed_is_accel = s == 2 || s == 4 || s == 5;
        if (speed_is_remain_stopped && motion_is_turn) continue;
        if (motion_is_brake && speed_is_accel) continue;
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("sub-command sentences are byte-exact") {
  CHECK(sentence(PerceptionClause::ApproachingJunction) ==
        "Approaching a junction, prepare to follow traffic rules.");
  CHECK(sentence(PerceptionClause::VehicleAtJunction) ==
        "A vehicle is present at the junction. Be cautious.");
  CHECK(sentence(PerceptionClause::MultipleVehiclesAtJunction) ==
        "Multiple vehicles are present at the junction. Be cautious.");
  CHECK(sentence(PerceptionClause::VehicleAhead) ==
        "Watch out for the car ahead, there's a vehicle in front.");
  CHECK(sentence(PerceptionClause::MultipleVehiclesAhead) ==
        "Watch out for the cars ahead, there are multiple vehicles in front.");
  CHECK(sentence(PerceptionClause::VehicleInLane) ==
        "A vehicle is present in the lane. Be cautious.");
  CHECK(sentence(PerceptionClause::MultipleVehiclesInLane) ==
        "Multiple vehicles are present in the lane. Be cautious.");
  CHECK(sentence(PerceptionClause::BikeAhead) == "There is a bike ahead. Be cautious.");
  CHECK(sentence(PerceptionClause::MultipleBikesAhead) ==
        "Multiple bikes are ahead. Be cautious.");
  CHECK(sentence(PerceptionClause::PedestrianAhead) ==
        "There is a pedestrian ahead. Be cautious.");
  CHECK(sentence(PerceptionClause::MultiplePedestriansAhead) ==
        "Multiple pedestrians are ahead. Be cautious.");
  CHECK(sentence(PerceptionClause::RedLightAhead) == "There is a red light ahead.");
  CHECK(sentence(PerceptionClause::StopSignAhead) == "There is a stop sign ahead.");

  CHECK(sentence(SpeedClause::SlowDown) == "Slow down to ensure safety.");
  CHECK(sentence(SpeedClause::StartAccelerating) ==
        "Start accelerating gradually towards the target speed.");
  CHECK(sentence(SpeedClause::RemainStopped) == "Remain stopped due to brake application.");
  CHECK(sentence(SpeedClause::SignificantlyBelowTarget) ==
        "Significantly below target speed, accelerate if safe.");
  CHECK(sentence(SpeedClause::SlightlyBelowTarget) ==
        "Slightly below target speed, gently increase acceleration.");
  CHECK(sentence(SpeedClause::AboveTarget) == "Above target speed, decelerate.");
  CHECK(sentence(SpeedClause::MaintainSpeed) ==
        "Maintain current speed to match the target speed.");

  CHECK(sentence(MotionClause::SteerRightSharp) == "Steer right sharply.");
  CHECK(sentence(MotionClause::SteerRightSlight) == "Make a slight right turn.");
  CHECK(sentence(MotionClause::SteerLeftSharp) == "Steer left sharply.");
  CHECK(sentence(MotionClause::SteerLeftSlight) == "Make a slight left turn.");
  CHECK(sentence(MotionClause::SteerStraight) == "Keep the steering wheel straight.");
  CHECK(sentence(MotionClause::Brake) == "Apply brakes safely.");
}

TEST_CASE("render_command joins clauses in canonical order") {
  MidLevelCommand red_brake;
  red_brake.perception = PerceptionClause::RedLightAhead;
  red_brake.motion = MotionClause::Brake;
  CHECK(render_command(red_brake) == "There is a red light ahead. Apply brakes safely.");

  MidLevelCommand accel_left;
  accel_left.speed = SpeedClause::SlightlyBelowTarget;
  accel_left.motion = MotionClause::SteerLeftSlight;
  CHECK(render_command(accel_left) ==
        "Slightly below target speed, gently increase acceleration. Make a slight left turn.");

  MidLevelCommand straight;
  CHECK(render_command(straight) == "Keep the steering wheel straight.");

  MidLevelCommand full;
  full.perception = PerceptionClause::ApproachingJunction;
  full.speed = SpeedClause::SlowDown;
  full.motion = MotionClause::SteerRightSlight;
  CHECK(render_command(full) ==
        "Approaching a junction, prepare to follow traffic rules. Slow down to ensure "
        "safety. Make a slight right turn.");
}

TEST_CASE("parse_command round-trips and normalizes whitespace") {
  const MidLevelCommand cmd = parse_command("Slow down to ensure safety. Make a slight right turn.");
  CHECK(cmd.speed == SpeedClause::SlowDown);
  CHECK(cmd.motion == MotionClause::SteerRightSlight);
  CHECK(!cmd.perception.has_value());

  const MidLevelCommand straight = parse_command("Keep the steering wheel straight.");
  CHECK(straight == MidLevelCommand{});

  const MidLevelCommand padded =
      parse_command("  Slow down to ensure safety.   Make a slight right turn.  ");
  CHECK(padded == cmd);
}

TEST_CASE("parse_command error taxonomy") {
  CHECK_THROWS_AS(parse_command("Fly over the bridge."), ParseError);
  CHECK_THROWS_AS(parse_command(""), ParseError);
  // Missing motion clause.
  CHECK_THROWS_AS(parse_command("Slow down to ensure safety."), ParseError);
  // Out of canonical order: motion before speed.
  CHECK_THROWS_AS(
      parse_command("Apply brakes safely. Slow down to ensure safety."), OrderError);
  // Duplicate category.
  CHECK_THROWS_AS(parse_command("There is a red light ahead. There is a stop sign ahead. "
                                "Apply brakes safely."),
                  OrderError);
  // Trailing clause after motion.
  CHECK_THROWS_AS(parse_command("Apply brakes safely. Apply brakes safely."), OrderError);
  // Structurally fine but excluded pairing.
  CHECK_THROWS_AS(
      parse_command("Remain stopped due to brake application. Make a slight left turn."),
      ParseError);
  // Unrecognized message names the offending sentence.
  try {
    parse_command("Keep the steering wheel straight. Fly over the bridge.");
    FAIL("expected ParseError");
  } catch (const OrderError&) {
    FAIL("expected ParseError, got OrderError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("Fly over the bridge.") != std::string::npos);
  }
}

TEST_CASE("enumeration matches the independent oracle and stays >= 160") {
  const std::vector<MidLevelCommand> all = enumerate_valid_commands();
  CHECK(static_cast<int>(all.size()) == oracle_valid_count());
  CHECK(all.size() == 574);
  CHECK(all.size() >= 160);

  // Duplicate-free: renderings are unique.
  std::set<std::string> rendered;
  for (const MidLevelCommand& c : all) rendered.insert(render_command(c));
  CHECK(rendered.size() == all.size());

  // Deterministic order.
  CHECK(enumerate_valid_commands() == all);
}

TEST_CASE("parse(render(c)) is the identity over the full enumeration") {
  for (const MidLevelCommand& c : enumerate_valid_commands()) {
    CHECK(parse_command(render_command(c)) == c);
  }
}

TEST_CASE("consistency exclusions") {
  MidLevelCommand stopped_turn;
  stopped_turn.speed = SpeedClause::RemainStopped;
  stopped_turn.motion = MotionClause::SteerLeftSharp;
  CHECK(!is_valid_command(stopped_turn));

  stopped_turn.motion = MotionClause::SteerStraight;
  CHECK(is_valid_command(stopped_turn));
  stopped_turn.motion = MotionClause::Brake;
  CHECK(is_valid_command(stopped_turn));

  MidLevelCommand accel_brake;
  accel_brake.speed = SpeedClause::StartAccelerating;
  accel_brake.motion = MotionClause::Brake;
  CHECK(!is_valid_command(accel_brake));
  accel_brake.speed = SpeedClause::SlowDown;
  CHECK(is_valid_command(accel_brake));
}

TEST_CASE("waypoints invariant: longitudinal magnitude marches forward") {
  Waypoints wp;  // all zero: at rest
  CHECK(waypoints_valid(wp));
  for (std::size_t i = 0; i < Waypoints::kCount; ++i)
    wp.points[i] = {0.0, 3.0 * static_cast<double>(i + 1)};
  CHECK(waypoints_valid(wp));
  wp.points[3].longitudinal_m = 2.0;
  CHECK(!waypoints_valid(wp));
}

TEST_CASE("control signal ranges and mutual exclusion") {
  CHECK(control_valid({0.4, 0.0, 0.0}));
  CHECK(control_valid({0.0, -1.0, 1.0}));
  CHECK(!control_valid({0.4, 0.0, 0.4}));
  CHECK(!control_valid({1.2, 0.0, 0.0}));
  CHECK(!control_valid({0.0, 1.4, 0.0}));

  const ControlSignal fixed = clamp_control({0.4, 2.0, 0.4});
  CHECK(control_valid(fixed));
  CHECK(fixed.brake == 0.4);
  CHECK(fixed.throttle == 0.0);
  CHECK(fixed.steer == 1.0);
}

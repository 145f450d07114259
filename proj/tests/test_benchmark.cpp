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

#include <filesystem>
#include <fstream>

#include "middrive/benchmark.hpp"
#include "middrive/dataset.hpp"
#include "middrive/json_io.hpp"

using namespace middrive;

namespace {

RouteScenario straight_scenario(double length = 100.0) {
  RouteScenario sc;
  sc.route.name = "unit-straight";
  const int n = static_cast<int>(length / 4.0);
  for (int i = 0; i <= n; ++i) sc.route.polyline.push_back({i * 4.0, 0.0});
  finalize_route_polyline(sc.route);
  return sc;
}

const RouteScenario& turning_scenario() {
  static const TownMap town = generate_town(1, 42);
  return town.short_routes[1];
}

}  // namespace

TEST_CASE("reference stack completes a straight tiny route with no infractions") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 3;
  const EpisodeLog log =
      run_episode(straight_scenario(), planner, controller, InstructionMode::PerSegment, cfg);
  CHECK(log.termination == Termination::Completed);
  CHECK(log.all_infractions().empty());
  CHECK(log.final_progress >= 0.99);
  CHECK(log.distance_driven_m > 90.0);
}

TEST_CASE("frozen-straight stub deviates on a turning route") {
  FrozenCommandPlanner stub;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 3;
  const EpisodeLog log = run_episode(turning_scenario(), stub, controller,
                                     InstructionMode::PerSegment, cfg);
  CHECK(log.termination == Termination::Deviated);
  CHECK(log.final_progress < 0.9);
}

TEST_CASE("planner cadence 1 and 10 both complete trivial geometry") {
  for (int cadence : {1, 10}) {
    RulePlanner planner;
    WaypointController controller;
    EpisodeConfig cfg;
    cfg.seed = 3;
    cfg.planner_cadence = cadence;
    const EpisodeLog log = run_episode(straight_scenario(), planner, controller,
                                       InstructionMode::PerSegment, cfg);
    CHECK(log.termination == Termination::Completed);
  }
}

TEST_CASE("bad episode config is rejected") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.planner_cadence = 0;
  CHECK_THROWS_AS(run_episode(straight_scenario(), planner, controller,
                              InstructionMode::PerSegment, cfg),
                  ConfigError);
  cfg.planner_cadence = 10;
  cfg.dt_s = 0.0;
  CHECK_THROWS_AS(run_episode(straight_scenario(), planner, controller,
                              InstructionMode::PerSegment, cfg),
                  ConfigError);
}

TEST_CASE("commands refresh only at decision frames") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 3;
  cfg.planner_cadence = 10;
  const EpisodeLog log =
      run_episode(straight_scenario(), planner, controller, InstructionMode::PerSegment, cfg);
  for (const TickRecord& t : log.ticks) {
    CHECK(t.decision == (t.tick % 10 == 0));
    if (!t.decision) {
      CHECK(t.command == log.ticks[static_cast<std::size_t>(t.tick - 1)].command);
    }
  }
}

TEST_CASE("segment transitions fire exactly once per boundary") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 3;
  const RouteScenario& sc = turning_scenario();
  const EpisodeLog log =
      run_episode(sc, planner, controller, InstructionMode::PerSegment, cfg);
  REQUIRE(log.termination == Termination::Completed);
  const auto segments = segment_route(sc.route);
  CHECK(log.transitions.size() == segments.size() - 1);
  for (std::size_t i = 0; i < log.transitions.size(); ++i) {
    CHECK(log.transitions[i].from_segment == static_cast<int>(i));
    CHECK(log.transitions[i].to_segment == static_cast<int>(i + 1));
    CHECK(log.transitions[i].boundary_m == doctest::Approx(segments[i].end_m));
  }
  // ticks carry the segment they were driven in, never regressing
  int prev_seg = 0;
  for (const TickRecord& t : log.ticks) {
    CHECK(t.segment >= prev_seg);
    prev_seg = t.segment;
  }
}

TEST_CASE("oversteer injection: reference recovers, stub deviates") {
  const RouteScenario& sc = turning_scenario();
  EpisodeConfig cfg;
  cfg.seed = 7;
  cfg.perturbation = Perturbation{0.25, 0.4};

  RulePlanner rules;
  WaypointController wc;
  const EpisodeLog ref = run_episode(sc, rules, wc, InstructionMode::PerSegment, cfg);
  CHECK(ref.termination == Termination::Completed);

  const double kick_s = 0.25 * sc.route.length_m;
  bool past = false;
  double dist = 0.0;
  double peak = 0.0;
  double recovered_at = -1.0;
  for (const TickRecord& t : ref.ticks) {
    if (!past && t.progress * sc.route.length_m >= kick_s) {
      past = true;
      continue;
    }
    if (!past) continue;
    dist += t.speed_mps * 0.1;
    peak = std::max(peak, std::abs(t.lateral_offset_m));
    if (recovered_at < 0.0 && peak > 1.0 && std::abs(t.lateral_offset_m) < 1.0)
      recovered_at = dist;
    if (dist > 60.0) break;
  }
  CHECK(peak > 1.0);  // the kick is actually disruptive
  CHECK(recovered_at > 0.0);
  CHECK(recovered_at < 50.0);

  FrozenCommandPlanner stub;
  WaypointController wc2;
  const EpisodeLog frozen = run_episode(sc, stub, wc2, InstructionMode::PerSegment, cfg);
  CHECK(frozen.termination == Termination::Deviated);
}

TEST_CASE("compose_long_horizon templates") {
  SUBCASE("start / turn / continue triple") {
    std::vector<Instruction> ins = {
        {"Alright, you can start driving.", Instruction::Kind::Short, 40.0, {}},
        {"Turn left at the next junction.", Instruction::Kind::Short, 90.0, {}},
        {"Continue in a straight line along your current path.",
         Instruction::Kind::Short, 140.0, {}},
    };
    const Instruction lh = compose_long_horizon(ins);
    CHECK(lh.text ==
          "Go straight ahead, turn left at the end of the road, then continue straight.");
    CHECK(lh.kind == Instruction::Kind::LongHorizon);
    CHECK(lh.segment_boundaries_m == std::vector<double>{40.0, 90.0, 140.0});
  }

  SUBCASE("environmental cue weaves into the first leg") {
    std::vector<Instruction> ins = {
        {"Keep on rolling straight till you get to the next junction.",
         Instruction::Kind::Short, 60.0, {}},
        {"Turn right at the next junction.", Instruction::Kind::Short, 120.0, {}},
    };
    const Instruction lh =
        compose_long_horizon(ins, {"a turning point with palm trees", ""});
    CHECK(lh.text ==
          "Go straight until you see a turning point with palm trees ahead, then turn "
          "right and follow the road.");
  }

  SUBCASE("single instruction passes through as long-horizon") {
    std::vector<Instruction> ins = {
        {"Keep going along this road.", Instruction::Kind::Short, 80.0, {}}};
    const Instruction lh = compose_long_horizon(ins);
    CHECK(lh.text == "Keep going along this road.");
    CHECK(lh.kind == Instruction::Kind::LongHorizon);
  }

  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(compose_long_horizon({}), ConfigError);
  }
}

TEST_CASE("long-horizon episodes issue one instruction at the start") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 5;
  const RouteScenario& sc = turning_scenario();
  const EpisodeLog log =
      run_episode(sc, planner, controller, InstructionMode::LongHorizonAtStart, cfg);
  CHECK(log.termination == Termination::Completed);
  REQUIRE(!log.ticks.empty());
  for (const TickRecord& t : log.ticks) CHECK(t.instruction == log.instruction);
  CHECK(log.transitions.size() == segment_route(sc.route).size() - 1);
}

TEST_CASE("split_novel_environment partitions towns") {
  const std::vector<int> pool = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto [train, eval] = split_novel_environment(pool, {8}, 42);
  CHECK(train == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  CHECK(!eval.routes.empty());
  for (const SuiteRouteRef& ref : eval.routes) CHECK(ref.town_id == 8);
  for (int t : train) CHECK(eval.holdout_towns.count(t) == 0);

  CHECK_THROWS_AS(split_novel_environment(pool, {}, 42), ConfigError);
  CHECK_THROWS_AS(split_novel_environment(pool, {1, 2, 3, 4, 5, 6, 7, 8}, 42), ConfigError);
  CHECK_THROWS_AS(split_novel_environment({1, 2}, {3}, 42), ConfigError);
}

TEST_CASE("episode logs serialize losslessly enough to reproduce scoring") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 11;
  const RouteScenario sc = straight_scenario();
  const EpisodeLog log =
      run_episode(sc, planner, controller, InstructionMode::PerSegment, cfg);

  const std::string path =
      (std::filesystem::temp_directory_path() / "middrive_episode.jsonl").string();
  write_episode_log(log, sc.route, "cafebabe", path);
  const LoadedEpisode loaded = read_episode_log(path);
  CHECK(loaded.config_hash == "cafebabe");
  CHECK(loaded.log.route_name == log.route_name);
  CHECK(loaded.log.termination == log.termination);
  CHECK(loaded.log.ticks.size() == log.ticks.size());
  CHECK(loaded.log.distance_driven_m == log.distance_driven_m);
  CHECK(loaded.route.length_m == doctest::Approx(sc.route.length_m));
  for (std::size_t i = 0; i < log.ticks.size(); i += 37) {
    CHECK(loaded.log.ticks[i].command == log.ticks[i].command);
    CHECK(loaded.log.ticks[i].telemetry == log.ticks[i].telemetry);
    CHECK(loaded.log.ticks[i].waypoints == log.ticks[i].waypoints);
  }
  std::filesystem::remove(path);
}

TEST_CASE("run_suite is reproducible and sorted, workers included") {
  SuiteSpec suite;
  suite.name = "unit";
  suite.town_seed = 42;
  suite.instruction_mode = InstructionMode::PerSegment;
  suite.routes = {{1, LengthClass::Tiny, 0},
                  {2, LengthClass::Tiny, 1},
                  {1, LengthClass::Tiny, 1},
                  {3, LengthClass::Tiny, 2}};

  EpisodeConfig cfg;
  cfg.seed = 9;
  const SuiteRunArtifacts a = run_suite(suite, "rules", "waypoint", cfg, 1);
  const SuiteRunArtifacts b = run_suite(suite, "rules", "waypoint", cfg, 4);

  REQUIRE(a.logs.size() == 4);
  REQUIRE(b.logs.size() == 4);
  for (std::size_t i = 1; i < a.logs.size(); ++i)
    CHECK(a.logs[i - 1].route_name < a.logs[i].route_name);
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    CHECK(a.logs[i].route_name == b.logs[i].route_name);
    CHECK(a.logs[i].termination == b.logs[i].termination);
    CHECK(a.logs[i].distance_driven_m == b.logs[i].distance_driven_m);  // bit-exact
    CHECK(a.logs[i].ticks.size() == b.logs[i].ticks.size());
  }

  CHECK_THROWS_AS(run_suite(suite, "no-such-planner", "waypoint", cfg, 1), ConfigError);
  CHECK_THROWS_AS(run_suite(suite, "rules", "no-such-controller", cfg, 1), ConfigError);
}

TEST_CASE("online planning equals offline annotation over decision frames") {
  RulePlanner planner;
  WaypointController controller;
  EpisodeConfig cfg;
  cfg.seed = 13;
  const RouteScenario& sc = turning_scenario();
  const EpisodeLog log =
      run_episode(sc, planner, controller, InstructionMode::LongHorizonAtStart, cfg);

  std::vector<LoggedFrame> frames;
  for (const TickRecord& t : log.ticks) {
    if (!t.decision) continue;
    frames.push_back({t.time_s, t.telemetry, t.position, t.heading_rad});
  }
  const Instruction instruction{log.instruction, Instruction::Kind::LongHorizon, {}, {}};
  const auto records = annotate_log(frames, instruction);
  REQUIRE(!records.empty());

  std::vector<std::string> live;
  for (const TickRecord& t : log.ticks)
    if (t.decision) live.push_back(t.command);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].command == live[i]);
  }
}

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

#include "middrive/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "middrive/errors.hpp"
#include "middrive/json_io.hpp"

namespace middrive {

const char* to_string(InstructionMode m) {
  return m == InstructionMode::PerSegment ? "per_segment" : "long_horizon_at_start";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Deviated: return "deviated";
    case Termination::Blocked: return "blocked";
    case Termination::Timeout: return "timeout";
  }
  return "timeout";
}

std::vector<InfractionEvent> EpisodeLog::all_infractions() const {
  std::vector<InfractionEvent> out;
  for (const TickRecord& t : ticks)
    out.insert(out.end(), t.infractions.begin(), t.infractions.end());
  return out;
}

std::vector<RouteSegment> segment_route(const Route& route) {
  std::vector<RouteSegment> segments;
  double start = 0.0;
  for (const Route::Turn& turn : route.turns) {
    RouteSegment seg;
    seg.start_m = start;
    seg.end_m = turn.arclength_m;
    seg.maneuver_at_end = turn.direction;
    seg.directive.text = turn.direction == TurnDirection::Left
                             ? "Turn left at the next junction."
                             : "Turn right at the next junction.";
    seg.directive.distance_m = seg.end_m;
    segments.push_back(seg);
    start = turn.arclength_m;
  }
  RouteSegment tail;
  tail.start_m = start;
  tail.end_m = route.length_m;
  tail.maneuver_at_end = TurnDirection::Straight;
  tail.directive.text = segments.empty()
                            ? "Alright, you can start driving."
                            : "Continue in a straight line along your current path.";
  tail.directive.distance_m = tail.end_m;
  segments.push_back(tail);
  return segments;
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

TurnDirection directive_direction(const std::string& text) {
  // Whole-word scan ("Alright" must not read as a right turn).
  std::string word;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const char c = i < text.size() ? text[i] : ' ';
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      continue;
    }
    if (word == "left") return TurnDirection::Left;
    if (word == "right") return TurnDirection::Right;
    word.clear();
  }
  return TurnDirection::Straight;
}

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

}  // namespace

EpisodeLog run_episode(const RouteScenario& scenario, PlannerInterface& planner,
                       ControllerInterface& controller, InstructionMode mode,
                       const EpisodeConfig& config) {
  if (config.planner_cadence < 1) throw ConfigError("planner cadence must be >= 1");
  if (config.dt_s <= 0.0) throw ConfigError("dt must be > 0");

  const Route& route = scenario.route;
  EpisodeLog log;
  log.route_name = route.name;
  log.town_id = route.town_id;
  log.seed = config.seed;

  std::vector<RouteSegment> segments = segment_route(route);
  Instruction long_horizon;
  if (mode == InstructionMode::LongHorizonAtStart) {
    std::vector<Instruction> directives;
    std::vector<std::string> cues;
    for (const RouteSegment& seg : segments) {
      directives.push_back(seg.directive);
      // Use a landmark near the segment end as the cue when one exists.
      std::string cue;
      for (const Route::Landmark& lm : route.landmarks) {
        if (std::abs(lm.arclength_m - seg.end_m) < 20.0) {
          cue = lm.tag;
          break;
        }
      }
      cues.push_back(cue);
    }
    long_horizon = compose_long_horizon(directives, cues);
    log.instruction = long_horizon.text;
  } else {
    for (const RouteSegment& seg : segments) {
      if (seg.directive.kind == Instruction::Kind::LongHorizon)
        throw ConfigError("long-horizon directive in per-segment mode");
    }
    log.instruction = segments.front().directive.text;
  }

  const double timeout_s =
      route.length_m / (config.timeout_speed_fraction * config.sim.speed_max_mps);
  const long max_ticks = static_cast<long>(std::ceil(timeout_s / config.dt_s));

  WorldState state = make_world(route, scenario.actors, scenario.signals, config.seed);
  ControllerState ctrl_state;
  MidLevelCommand command;
  int segment_index = 0;
  bool perturbed = false;

  log.termination = Termination::Timeout;
  for (long tick = 0; tick < max_ticks; ++tick) {
    const Instruction& active = mode == InstructionMode::LongHorizonAtStart
                                    ? long_horizon
                                    : segments[static_cast<std::size_t>(segment_index)].directive;

    const TelemetryFrame frame = observe(state, active, config.sim);
    const bool decision = tick % config.planner_cadence == 0;
    if (decision) command = planner.plan(frame, active);

    const Waypoints wp = controller.plan_waypoints(frame, active, command);
    auto [control, next_ctrl_state] =
        track_waypoints(state.ego, wp, ctrl_state, config.dt_s);
    ctrl_state = next_ctrl_state;

    WorldState next = step(state, control, config.dt_s, config.sim);
    const std::vector<InfractionEvent> events = detect_infractions(state, next, config.sim);

    TickRecord rec;
    rec.tick = tick;
    rec.time_s = state.time_s;
    rec.position = state.ego.position;
    rec.heading_rad = state.ego.heading_rad;
    rec.speed_mps = state.ego.speed_mps;
    rec.control = control;
    rec.command = render_command(command);
    rec.decision = decision;
    rec.waypoints = wp;
    rec.telemetry = frame;
    rec.instruction = active.text;
    rec.segment = segment_index;
    rec.progress = route_progress(next).first;
    rec.lateral_offset_m = next.lateral_offset_m;
    rec.infractions = events;
    log.ticks.push_back(std::move(rec));

    log.distance_driven_m += next.ego.speed_mps * config.dt_s;

    // Segment handover (fires once per boundary: progress is monotone).
    while (segment_index + 1 < static_cast<int>(segments.size()) &&
           next.progress_m >= segments[static_cast<std::size_t>(segment_index)].end_m) {
      log.transitions.push_back({tick, segment_index, segment_index + 1,
                                 segments[static_cast<std::size_t>(segment_index)].end_m});
      ++segment_index;
    }

    if (config.perturbation && !perturbed &&
        route_progress(next).first >= config.perturbation->at_progress) {
      next.ego.heading_rad =
          wrap_angle(next.ego.heading_rad + config.perturbation->heading_delta_rad);
      perturbed = true;
    }

    bool stop = false;
    for (const InfractionEvent& ev : events) {
      if (ev.kind == InfractionKind::RouteDeviation) {
        log.termination = Termination::Deviated;
        stop = true;
      } else if (ev.kind == InfractionKind::Blocked) {
        log.termination = Termination::Blocked;
        stop = true;
      }
    }
    if (route_progress(next).first >= config.completion_threshold) {
      log.termination = Termination::Completed;
      stop = true;
    }

    state = std::move(next);
    if (stop) break;
  }

  log.final_progress = route_progress(state).first;
  log.offroad_distance_m = state.offroad_distance_m;
  return log;
}

Instruction compose_long_horizon(const std::vector<Instruction>& instructions,
                                 const std::vector<std::string>& cues) {
  if (instructions.empty()) throw ConfigError("compose_long_horizon needs >= 1 instruction");

  Instruction out;
  out.kind = Instruction::Kind::LongHorizon;
  for (const Instruction& ins : instructions) {
    if (ins.distance_m) out.segment_boundaries_m.push_back(*ins.distance_m);
  }

  if (instructions.size() == 1) {
    out.text = instructions.front().text;
    return out;
  }

  auto cue_for = [&](std::size_t i) -> std::string {
    return i < cues.size() ? cues[i] : std::string();
  };

  std::vector<std::string> phrases;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    const TurnDirection dir = directive_direction(instructions[i].text);
    const std::string cue = cue_for(i);
    const bool first = i == 0;
    const bool last = i + 1 == instructions.size();
    std::string phrase;
    if (dir == TurnDirection::Straight) {
      if (first) {
        phrase = cue.empty() ? "Go straight ahead"
                             : "Go straight until you see " + cue + " ahead";
      } else if (last) {
        phrase = "then continue straight";
      } else {
        phrase = cue.empty() ? "continue straight"
                             : "go straight until you see " + cue + " ahead";
      }
    } else {
      const std::string side = dir == TurnDirection::Left ? "left" : "right";
      if (first) {
        phrase = "Turn " + side + " ahead";
        if (!cue.empty()) phrase += " when you reach " + cue;
      } else if (last) {
        phrase = "then turn " + side + " and follow the road";
      } else {
        phrase = cue.empty() ? "turn " + side + " at the end of the road"
                             : "turn " + side + " when you reach " + cue;
      }
    }
    phrases.push_back(phrase);
  }

  std::string text = phrases.front();
  for (std::size_t i = 1; i < phrases.size(); ++i) {
    text += ", " + lower_first(phrases[i]);
  }
  text += ".";
  // First word stays capitalized; lower_first above only touches joiners.
  out.text = text;
  return out;
}

std::pair<std::vector<int>, SuiteSpec> split_novel_environment(
    const std::vector<int>& town_pool, const std::set<int>& holdout,
    std::uint64_t town_seed) {
  if (holdout.empty()) throw ConfigError("holdout must be non-empty");
  for (int t : holdout) {
    if (std::find(town_pool.begin(), town_pool.end(), t) == town_pool.end())
      throw ConfigError("holdout town not in pool: " + std::to_string(t));
  }
  if (holdout.size() >= town_pool.size()) throw ConfigError("holdout must leave train towns");

  std::vector<int> train;
  for (int t : town_pool) {
    if (holdout.count(t) == 0) train.push_back(t);
  }

  SuiteSpec eval;
  eval.name = "novel-environment";
  eval.town_seed = town_seed;
  eval.instruction_mode = InstructionMode::PerSegment;
  eval.holdout_towns = holdout;
  for (int t : holdout) {
    const TownMap town = generate_town(t, town_seed);
    for (int i = 0; i < static_cast<int>(town.tiny_routes.size()); ++i) {
      eval.routes.push_back({t, LengthClass::Tiny, i});
    }
  }
  return {train, eval};
}

namespace {

std::mutex g_town_cache_mutex;
std::map<std::pair<int, std::uint64_t>, TownMap> g_town_cache;

const TownMap& cached_town(int town_id, std::uint64_t seed) {
  std::lock_guard<std::mutex> lock(g_town_cache_mutex);
  const auto key = std::make_pair(town_id, seed);
  auto it = g_town_cache.find(key);
  if (it == g_town_cache.end()) {
    it = g_town_cache.emplace(key, generate_town(town_id, seed)).first;
  }
  return it->second;
}

}  // namespace

const RouteScenario& resolve_route(const SuiteSpec& suite, const SuiteRouteRef& ref) {
  const TownMap& town = cached_town(ref.town_id, suite.town_seed);
  const std::vector<RouteScenario>& pool = town.pool(ref.length_class);
  if (ref.index < 0 || ref.index >= static_cast<int>(pool.size()))
    throw ConfigError("route index out of range for town " + std::to_string(ref.town_id));
  return pool[static_cast<std::size_t>(ref.index)];
}

SuiteRunArtifacts run_suite(const SuiteSpec& suite, const std::string& planner_name,
                            const std::string& controller_name, const EpisodeConfig& config,
                            int workers) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!make_planner(planner_name)) throw ConfigError("unknown planner: " + planner_name);
  if (!make_controller(controller_name))
    throw ConfigError("unknown controller: " + controller_name);

  SuiteRunArtifacts artifacts;
  artifacts.logs.resize(suite.routes.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= suite.routes.size()) break;
      const RouteScenario& scenario = resolve_route(suite, suite.routes[i]);
      const auto planner = make_planner(planner_name);
      const auto controller = make_controller(controller_name);
      EpisodeConfig ep = config;
      ep.seed = mix(config.seed, static_cast<std::uint64_t>(i));
      artifacts.logs[i] =
          run_episode(scenario, *planner, *controller, suite.instruction_mode, ep);
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::sort(artifacts.logs.begin(), artifacts.logs.end(),
            [](const EpisodeLog& a, const EpisodeLog& b) {
              return a.route_name < b.route_name;
            });
  return artifacts;
}

SuiteSpec load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suite file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("invalid suite JSON in " + path + ": " + e.what());
  }
  SuiteSpec suite;
  suite.name = j.at("name").get<std::string>();
  suite.town_seed = j.at("town_seed").get<std::uint64_t>();
  const std::string mode = j.at("instruction_mode").get<std::string>();
  if (mode == "per_segment") {
    suite.instruction_mode = InstructionMode::PerSegment;
  } else if (mode == "long_horizon_at_start") {
    suite.instruction_mode = InstructionMode::LongHorizonAtStart;
  } else {
    throw ConfigError("unknown instruction_mode: " + mode);
  }
  for (const Json& r : j.at("routes")) {
    SuiteRouteRef ref;
    ref.town_id = r.at("town_id").get<int>();
    const auto cls = length_class_from_string(r.at("length_class").get<std::string>());
    if (!cls) throw ConfigError("unknown length_class in suite " + path);
    ref.length_class = *cls;
    ref.index = r.at("index").get<int>();
    suite.routes.push_back(ref);
  }
  if (j.contains("holdout_towns")) {
    for (const Json& t : j.at("holdout_towns")) suite.holdout_towns.insert(t.get<int>());
  }
  for (const SuiteRouteRef& ref : suite.routes) {
    if (!suite.holdout_towns.empty() && suite.holdout_towns.count(ref.town_id) == 0)
      throw ConfigError("novel-environment suite contains a non-holdout route");
  }
  return suite;
}

void save_suite(const SuiteSpec& suite, const std::string& path) {
  Json j;
  j["name"] = suite.name;
  j["town_seed"] = suite.town_seed;
  j["instruction_mode"] = to_string(suite.instruction_mode);
  Json routes = Json::array();
  for (const SuiteRouteRef& r : suite.routes) {
    routes.push_back({{"town_id", r.town_id},
                      {"length_class", to_string(r.length_class)},
                      {"index", r.index}});
  }
  j["routes"] = routes;
  if (!suite.holdout_towns.empty()) {
    j["holdout_towns"] = std::vector<int>(suite.holdout_towns.begin(), suite.holdout_towns.end());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write suite file: " + path);
  out << j.dump(2) << '\n';
}

void write_episode_log(const EpisodeLog& log, const Route& route,
                       const std::string& config_hash, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write episode log: " + path);

  Json meta;
  meta["type"] = "meta";
  meta["route"] = log.route_name;
  meta["town_id"] = log.town_id;
  meta["seed"] = log.seed;
  meta["instruction"] = log.instruction;
  meta["config_hash"] = config_hash;
  meta["route_geometry"] = to_json(route);
  out << meta.dump() << '\n';

  for (const TickRecord& t : log.ticks) {
    Json j;
    j["type"] = "tick";
    j["tick"] = t.tick;
    j["time_s"] = t.time_s;
    j["x_m"] = t.position.x;
    j["y_m"] = t.position.y;
    j["heading_rad"] = t.heading_rad;
    j["speed_mps"] = t.speed_mps;
    j["control"] = to_json(t.control);
    j["mid_level_command"] = t.command;
    j["decision"] = t.decision;
    j["waypoints"] = to_json(t.waypoints);
    j["telemetry"] = to_json(t.telemetry);
    j["instruction"] = t.instruction;
    j["segment"] = t.segment;
    j["progress"] = t.progress;
    j["lateral_offset_m"] = t.lateral_offset_m;
    Json evs = Json::array();
    for (const InfractionEvent& e : t.infractions) evs.push_back(to_json(e));
    j["infractions"] = evs;
    out << j.dump() << '\n';
  }

  for (const SegmentTransition& tr : log.transitions) {
    Json j;
    j["type"] = "segment_transition";
    j["tick"] = tr.tick;
    j["from_segment"] = tr.from_segment;
    j["to_segment"] = tr.to_segment;
    j["boundary_m"] = tr.boundary_m;
    out << j.dump() << '\n';
  }

  Json summary;
  summary["type"] = "summary";
  summary["termination"] = to_string(log.termination);
  summary["distance_driven_m"] = log.distance_driven_m;
  summary["offroad_distance_m"] = log.offroad_distance_m;
  summary["final_progress"] = log.final_progress;
  out << summary.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

LoadedEpisode read_episode_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open episode log: " + path);
  LoadedEpisode loaded;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
    }
    const std::string type = j.value("type", "");
    try {
      if (type == "meta") {
        loaded.log.route_name = j.at("route").get<std::string>();
        loaded.log.town_id = j.at("town_id").get<int>();
        loaded.log.seed = j.at("seed").get<std::uint64_t>();
        loaded.log.instruction = j.at("instruction").get<std::string>();
        loaded.config_hash = j.at("config_hash").get<std::string>();
        loaded.route = route_from_json(j.at("route_geometry"));
      } else if (type == "tick") {
        TickRecord t;
        t.tick = j.at("tick").get<long>();
        t.time_s = j.at("time_s").get<double>();
        t.position = {j.at("x_m").get<double>(), j.at("y_m").get<double>()};
        t.heading_rad = j.at("heading_rad").get<double>();
        t.speed_mps = j.at("speed_mps").get<double>();
        t.control = control_from_json(j.at("control"));
        t.command = j.at("mid_level_command").get<std::string>();
        t.decision = j.at("decision").get<bool>();
        t.waypoints = waypoints_from_json(j.at("waypoints"));
        t.telemetry = telemetry_from_json(j.at("telemetry"));
        t.instruction = j.at("instruction").get<std::string>();
        t.segment = j.at("segment").get<int>();
        t.progress = j.at("progress").get<double>();
        t.lateral_offset_m = j.at("lateral_offset_m").get<double>();
        for (const Json& e : j.at("infractions"))
          t.infractions.push_back(infraction_from_json(e));
        loaded.log.ticks.push_back(std::move(t));
      } else if (type == "segment_transition") {
        SegmentTransition tr;
        tr.tick = j.at("tick").get<long>();
        tr.from_segment = j.at("from_segment").get<int>();
        tr.to_segment = j.at("to_segment").get<int>();
        tr.boundary_m = j.at("boundary_m").get<double>();
        loaded.log.transitions.push_back(tr);
      } else if (type == "summary") {
        const std::string term = j.at("termination").get<std::string>();
        if (term == "completed") loaded.log.termination = Termination::Completed;
        else if (term == "deviated") loaded.log.termination = Termination::Deviated;
        else if (term == "blocked") loaded.log.termination = Termination::Blocked;
        else loaded.log.termination = Termination::Timeout;
        loaded.log.distance_driven_m = j.at("distance_driven_m").get<double>();
        loaded.log.offroad_distance_m = j.at("offroad_distance_m").get<double>();
        loaded.log.final_progress = j.at("final_progress").get<double>();
      } else {
        throw std::runtime_error("unknown record type: " + type);
      }
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return loaded;
}

}  // namespace middrive

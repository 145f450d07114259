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

#include "middrive/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "middrive/benchmark.hpp"
#include "middrive/controller.hpp"
#include "middrive/dataset.hpp"
#include "middrive/metrics.hpp"
#include "middrive/plot.hpp"
#include "middrive/town.hpp"

namespace middrive {

namespace fs = std::filesystem;

Json to_json(const RunConfig& cfg) {
  Json j;
  j["suite"] = cfg.suite_path;
  j["seed"] = cfg.seed;
  j["dt_s"] = cfg.dt_s;
  j["planner_cadence"] = cfg.planner_cadence;
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  j["planner"] = cfg.planner;
  j["controller"] = cfg.controller;
  j["target_speed_mps"] = cfg.target_speed_mps;
  return j;
}

RunConfig run_config_from_json(const Json& j, const RunConfig& base) {
  RunConfig cfg = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "suite") cfg.suite_path = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "dt_s") cfg.dt_s = value.get<double>();
    else if (key == "planner_cadence") cfg.planner_cadence = value.get<int>();
    else if (key == "workers") cfg.workers = value.get<int>();
    else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
    else if (key == "planner") cfg.planner = value.get<std::string>();
    else if (key == "controller") cfg.controller = value.get<std::string>();
    else if (key == "target_speed_mps") cfg.target_speed_mps = value.get<double>();
    else throw ConfigError("unknown config key: " + key);
  }
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  // Only fields that shape the computation; artifact placement and worker
  // count must not perturb reproducibility checks.
  Json j = to_json(cfg);
  j.erase("out_dir");
  j.erase("workers");
  return fnv1a_hex(j.dump());
}

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.dt_s <= 0.0) throw ConfigError("dt must be > 0");
  if (cfg.planner_cadence < 1) throw ConfigError("planner cadence must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.target_speed_mps <= 0.0) throw ConfigError("target speed must be > 0");
  if (!make_planner(cfg.planner)) throw ConfigError("unknown planner: " + cfg.planner);
  if (!make_controller(cfg.controller))
    throw ConfigError("unknown controller: " + cfg.controller);
}

EpisodeConfig episode_config(const RunConfig& cfg) {
  EpisodeConfig ep;
  ep.dt_s = cfg.dt_s;
  ep.planner_cadence = cfg.planner_cadence;
  ep.sim.dt_s = cfg.dt_s;
  ep.sim.target_speed_mps = cfg.target_speed_mps;
  ep.seed = cfg.seed;
  return ep;
}

std::vector<LoggedFrame> frames_from_log(const EpisodeLog& log) {
  std::vector<LoggedFrame> frames;
  frames.reserve(log.ticks.size());
  for (const TickRecord& t : log.ticks) {
    frames.push_back({t.time_s, t.telemetry, t.position, t.heading_rad});
  }
  return frames;
}

void print_histogram(const char* title, const std::vector<HierarchyRecord>& records) {
  std::map<std::string, std::size_t> counts;
  for (const HierarchyRecord& r : records) counts[r.command]++;
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& [cmd, n] : counts) ranked.emplace_back(n, cmd);
  std::sort(ranked.rbegin(), ranked.rend());
  std::printf("%s: %zu records, %zu command groups\n", title, records.size(), counts.size());
  for (const auto& [n, cmd] : ranked) {
    std::printf("  %7zu  %s\n", n, cmd.c_str());
  }
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (!fs::exists(cfg.suite_path))
      throw ConfigError("suite file not found: " + cfg.suite_path);
    const SuiteSpec suite = load_suite(cfg.suite_path);
    const EpisodeConfig ep = episode_config(cfg);
    const std::string hash = config_hash(cfg);

    const SuiteRunArtifacts artifacts =
        run_suite(suite, cfg.planner, cfg.controller, ep, cfg.workers);

    fs::create_directories(cfg.out_dir);
    std::vector<RouteResult> results;
    for (std::size_t i = 0; i < artifacts.logs.size(); ++i) {
      const EpisodeLog& log = artifacts.logs[i];
      // Re-resolve for geometry: logs are sorted by name, refs are not.
      const Route* route = nullptr;
      for (const SuiteRouteRef& ref : suite.routes) {
        const RouteScenario& sc = resolve_route(suite, ref);
        if (sc.route.name == log.route_name) {
          route = &sc.route;
          break;
        }
      }
      if (!route) throw ConfigError("route vanished from suite: " + log.route_name);
      write_episode_log(log, *route, hash,
                        (fs::path(cfg.out_dir) / (log.route_name + ".jsonl")).string());
      results.push_back(score_route(log));
    }

    const SuiteAggregate agg = driving_score(results);
    std::map<std::string, double> rates;
    try {
      rates = infraction_rates(artifacts.logs);
    } catch (const ZeroDistanceError&) {
      // Nothing drove; leave the rate table empty.
    }

    const Json summary = summary_json(suite.name, hash, results, agg, rates);
    {
      std::ofstream out(fs::path(cfg.out_dir) / "suite_summary.json");
      if (!out) throw IoError("cannot write suite summary");
      out << summary.dump(2) << '\n';
    }
    {
      std::ofstream out(fs::path(cfg.out_dir) / "summary.csv");
      if (!out) throw IoError("cannot write summary.csv");
      out << "# config_hash=" << hash << '\n' << render_csv(results);
    }

    std::printf("%s", render_table(results, agg).c_str());
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_annotate(const std::string& log_path, const std::string& out_path) {
  try {
    if (!fs::exists(log_path)) throw ConfigError("log file not found: " + log_path);
    const LoadedEpisode loaded = read_episode_log(log_path);
    if (loaded.log.ticks.size() < 2) throw ConfigError("log has fewer than 2 ticks");
    Instruction instruction{loaded.log.instruction, Instruction::Kind::Short, {}, {}};
    const std::vector<HierarchyRecord> records =
        annotate_log(frames_from_log(loaded.log), instruction);
    write_records(records, out_path);
    std::printf("annotated %zu frames -> %s\n", records.size(), out_path.c_str());
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ShortLogError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_resample(const std::string& in_path, const std::string& out_path, double cap_ratio,
                 std::uint64_t seed) {
  try {
    if (cap_ratio < 1.0) throw ConfigError("cap ratio must be >= 1");
    if (!fs::exists(in_path)) throw ConfigError("records file not found: " + in_path);
    const std::vector<HierarchyRecord> records = read_records(in_path);
    const std::vector<HierarchyRecord> balanced = resample(records, cap_ratio, seed);
    print_histogram("before", records);
    print_histogram("after", balanced);
    write_records(balanced, out_path);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_score(const std::string& logs_dir, const std::optional<std::string>& out_dir) {
  try {
    if (!fs::is_directory(logs_dir)) throw ConfigError("not a directory: " + logs_dir);
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(logs_dir)) {
      if (entry.path().extension() == ".jsonl") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw ConfigError("no .jsonl episode logs in " + logs_dir);

    std::vector<EpisodeLog> logs;
    std::vector<RouteResult> results;
    std::string hash;
    for (const std::string& p : paths) {
      LoadedEpisode loaded = read_episode_log(p);
      hash = loaded.config_hash;
      results.push_back(score_route(loaded.log));
      logs.push_back(std::move(loaded.log));
    }
    const SuiteAggregate agg = driving_score(results);
    std::map<std::string, double> rates;
    try {
      rates = infraction_rates(logs);
    } catch (const ZeroDistanceError&) {
    }
    std::printf("%s", render_table(results, agg).c_str());
    if (!rates.empty()) {
      std::printf("per-km rates:");
      for (const auto& [k, v] : rates) std::printf("  %s=%.3f", k.c_str(), v);
      std::printf("\n");
    }
    if (out_dir) {
      fs::create_directories(*out_dir);
      std::ofstream out(fs::path(*out_dir) / "suite_summary.json");
      if (!out) throw IoError("cannot write suite summary");
      out << summary_json("scored", hash, results, agg, rates).dump(2) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_score_records(const std::string& records_path) {
  try {
    if (!fs::exists(records_path))
      throw ConfigError("records file not found: " + records_path);
    const std::vector<HierarchyRecord> records = read_records(records_path);
    if (records.empty()) throw ConfigError("no records in " + records_path);
    double sum = 0.0;
    double worst = 0.0;
    for (const HierarchyRecord& rec : records) {
      Instruction instruction{rec.instruction, Instruction::Kind::Short, {}, {}};
      const Waypoints pred =
          command_to_waypoints(rec.telemetry, instruction, parse_command(rec.command));
      const double err = waypoint_l1_error(pred, rec.waypoints);
      sum += err;
      worst = std::max(worst, err);
    }
    std::printf("waypoint L1 over %zu records: mean %.4f m, max %.4f m\n", records.size(),
                sum / static_cast<double>(records.size()), worst);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_plot(const std::string& log_path, const std::string& out_path) {
  try {
    if (!fs::exists(log_path)) throw ConfigError("log file not found: " + log_path);
    const LoadedEpisode loaded = read_episode_log(log_path);
    const std::string svg = render_episode_svg(loaded.log, loaded.route);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + out_path);
    out << "<!-- config_hash=" << loaded.config_hash << " -->\n" << svg;
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_gen_town(int town_id, std::uint64_t seed, const std::string& out_path) {
  try {
    const TownMap town = generate_town(town_id, seed);
    Json j;
    j["town_id"] = town.town_id;
    j["seed"] = town.seed;
    j["config_hash"] = fnv1a_hex(std::to_string(town_id) + ":" + std::to_string(seed));
    Json nodes = Json::array();
    for (const TownMap::Node& n : town.nodes) {
      Json nj;
      nj["x_m"] = n.position.x;
      nj["y_m"] = n.position.y;
      nj["landmark"] = n.landmark;
      nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    Json edges = Json::array();
    for (const auto& [a, b] : town.edges) edges.push_back({a, b});
    j["edges"] = edges;
    for (LengthClass cls : {LengthClass::Tiny, LengthClass::Short, LengthClass::Long}) {
      Json routes = Json::array();
      for (const RouteScenario& sc : town.pool(cls)) routes.push_back(to_json(sc.route));
      j[std::string(to_string(cls)) + "_routes"] = routes;
    }
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write: " + out_path);
    out << j.dump(2) << '\n';
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
  } catch (const TownError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

int cmd_config_show(const RunConfig& cfg) {
  std::printf("%s\n", to_json(cfg).dump(2).c_str());
  std::printf("config_hash: %s\n", config_hash(cfg).c_str());
  return kExitOk;
}

}  // namespace middrive

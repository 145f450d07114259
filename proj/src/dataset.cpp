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

#include "middrive/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "middrive/json_io.hpp"

namespace middrive {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

EgoPoint to_ego_frame(const LoggedFrame& origin, Vec2 world) {
  const Vec2 rel = world - origin.position;
  const double ch = std::cos(origin.heading_rad);
  const double sh = std::sin(origin.heading_rad);
  EgoPoint p;
  p.longitudinal_m = rel.x * ch + rel.y * sh;
  p.lateral_m = rel.x * sh - rel.y * ch;
  return p;
}

}  // namespace

std::vector<HierarchyRecord> annotate_log(const std::vector<LoggedFrame>& frames,
                                          const Instruction& instruction,
                                          const DatasetConfig& cfg) {
  if (frames.size() < 6) throw ShortLogError("log too short: need at least 6 frames");

  const double frame_dt = frames[1].time_s - frames[0].time_s;
  const long stride = std::max<long>(
      1, std::lround(cfg.waypoint_cadence_s / std::max(frame_dt, 1e-9)));
  const std::size_t horizon = static_cast<std::size_t>(stride) * Waypoints::kCount;
  if (frames.size() <= horizon) throw ShortLogError("log too short for waypoint horizon");

  std::vector<HierarchyRecord> records;
  records.reserve(frames.size() - horizon);
  for (std::size_t i = 0; i + horizon < frames.size(); ++i) {
    HierarchyRecord rec;
    rec.frame_id = static_cast<long>(i);
    rec.instruction = instruction.text;
    rec.telemetry = frames[i].telemetry;
    rec.command = render_command(plan(frames[i].telemetry, instruction, cfg.planner));
    for (std::size_t k = 0; k < Waypoints::kCount; ++k) {
      const std::size_t j = i + (k + 1) * static_cast<std::size_t>(stride);
      rec.waypoints.points[k] = to_ego_frame(frames[i], frames[j].position);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<std::size_t> resample_plan(const std::vector<std::size_t>& group_sizes,
                                       double cap_ratio, std::size_t floor_count) {
  if (cap_ratio < 1.0) throw std::invalid_argument("cap_ratio must be >= 1");
  if (group_sizes.empty()) return {};
  const std::size_t min_size = *std::min_element(group_sizes.begin(), group_sizes.end());
  const std::size_t cap =
      static_cast<std::size_t>(cap_ratio * static_cast<double>(min_size));
  std::vector<std::size_t> retained;
  retained.reserve(group_sizes.size());
  for (std::size_t n : group_sizes) {
    retained.push_back(n <= floor_count ? n : std::min(n, cap));
  }
  return retained;
}

std::vector<HierarchyRecord> resample(const std::vector<HierarchyRecord>& records,
                                      double cap_ratio, std::uint64_t seed,
                                      std::size_t floor_count) {
  if (cap_ratio < 1.0) throw std::invalid_argument("cap_ratio must be >= 1");
  if (records.empty()) return {};

  std::map<std::string, std::vector<std::size_t>> groups;  // command -> record indices
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[records[i].command].push_back(i);
  }

  std::vector<std::string> keys;
  std::vector<std::size_t> sizes;
  for (const auto& [cmd, idx] : groups) {
    keys.push_back(cmd);
    sizes.push_back(idx.size());
  }
  const std::vector<std::size_t> retained = resample_plan(sizes, cap_ratio, floor_count);

  std::vector<char> keep(records.size(), 0);
  for (std::size_t gi = 0; gi < keys.size(); ++gi) {
    const std::vector<std::size_t>& idx = groups[keys[gi]];
    const std::size_t want = retained[gi];
    if (want >= idx.size()) {
      for (std::size_t i : idx) keep[i] = 1;
      continue;
    }
    // Keep the `want` members with the smallest keyed hash; order inside the
    // group is untouched because keeps are emitted in input order.
    std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
    ranked.reserve(idx.size());
    const std::uint64_t group_seed = splitmix64(seed ^ hash_string(keys[gi]));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      ranked.emplace_back(splitmix64(group_seed ^ (0x9e3779b97f4a7c15ULL * (k + 1))), idx[k]);
    }
    std::sort(ranked.begin(), ranked.end());
    for (std::size_t k = 0; k < want; ++k) keep[ranked[k].second] = 1;
  }

  std::vector<HierarchyRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.push_back(records[i]);
  }
  return out;
}

void write_records(const std::vector<HierarchyRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const HierarchyRecord& rec : records) {
    Json j;
    j["frame_id"] = rec.frame_id;
    j["instruction"] = rec.instruction;
    j["command"] = rec.command;
    j["waypoints"] = to_json(rec.waypoints);
    j["telemetry"] = to_json(rec.telemetry);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<HierarchyRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<HierarchyRecord> records;
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
    try {
      HierarchyRecord rec;
      rec.frame_id = j.at("frame_id").get<long>();
      rec.instruction = j.at("instruction").get<std::string>();
      rec.command = j.at("command").get<std::string>();
      parse_command(rec.command);  // grammar closure on disk
      rec.waypoints = waypoints_from_json(j.at("waypoints"));
      rec.telemetry = telemetry_from_json(j.at("telemetry"));
      records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return records;
}

}  // namespace middrive

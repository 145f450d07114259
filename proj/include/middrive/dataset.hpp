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

#include <cstdint>
#include <string>
#include <vector>

#include "middrive/errors.hpp"
#include "middrive/hierarchy.hpp"
#include "middrive/planner.hpp"
#include "middrive/telemetry.hpp"
#include "middrive/world.hpp"

namespace middrive {

/// One recorded simulation frame: what the planner saw plus the world pose
/// needed to recover ground-truth waypoints.
struct LoggedFrame {
  double time_s = 0.0;
  TelemetryFrame telemetry;
  Vec2 position;
  double heading_rad = 0.0;
};

/// One dataset entry carrying all three hierarchy levels.
struct HierarchyRecord {
  long frame_id = 0;
  std::string instruction;
  std::string command;  // canonical rendering, parses under the grammar
  Waypoints waypoints;  // ground truth from the log's future poses, ego frame
  TelemetryFrame telemetry;

  bool operator==(const HierarchyRecord&) const = default;
};

struct ShortLogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetConfig {
  double waypoint_cadence_s = 0.5;  // matches the controller's spacing
  PlannerConfig planner;
};

/// Retrospectively label every frame that still has 5 future poses at the
/// waypoint cadence. Commands come from the shared rule engine, so offline
/// labels match what the live planner produced. Throws ShortLogError when no
/// frame is labelable.
std::vector<HierarchyRecord> annotate_log(const std::vector<LoggedFrame>& frames,
                                          const Instruction& instruction,
                                          const DatasetConfig& cfg = {});

/// Frequency cap for one command group: groups no larger than floor_count are
/// kept whole, everything else is capped at cap_ratio x the smallest group.
std::vector<std::size_t> resample_plan(const std::vector<std::size_t>& group_sizes,
                                       double cap_ratio, std::size_t floor_count = 50);

/// Long-tail correction: seeded deterministic subsample per command string.
/// Relative order is preserved; output never exceeds the input.
std::vector<HierarchyRecord> resample(const std::vector<HierarchyRecord>& records,
                                      double cap_ratio, std::uint64_t seed = 0,
                                      std::size_t floor_count = 50);

/// JSONL round-trip with fixed field order. SchemaError names the offending
/// line; IoError covers unreadable/unwritable paths.
void write_records(const std::vector<HierarchyRecord>& records, const std::string& path);
std::vector<HierarchyRecord> read_records(const std::string& path);

}  // namespace middrive

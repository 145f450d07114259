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
#include <optional>
#include <string>

#include "middrive/json_io.hpp"

namespace middrive {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::string suite_path;
  std::uint64_t seed = 7;
  double dt_s = 0.1;
  int planner_cadence = 10;
  int workers = 1;
  std::string out_dir = "out";
  std::string planner = "rules";
  std::string controller = "waypoint";
  double target_speed_mps = 6.0;
};

Json to_json(const RunConfig& cfg);
/// Overlay `j` onto `base`; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j, const RunConfig& base);
/// Stable hash of the canonical config JSON, embedded in every artifact.
std::string config_hash(const RunConfig& cfg);

/// Runs every episode in the suite, writes per-route EpisodeLog JSONL plus
/// suite summary JSON/CSV, and prints the DS/RC/IS table.
int cmd_run(const RunConfig& cfg);

int cmd_annotate(const std::string& log_path, const std::string& out_path);
int cmd_resample(const std::string& in_path, const std::string& out_path, double cap_ratio,
                 std::uint64_t seed);
/// Scores a directory of episode logs (DS/RC/IS + per-km rates).
int cmd_score(const std::string& logs_dir, const std::optional<std::string>& out_dir);
/// Offline waypoint L1 over a HierarchyRecord file.
int cmd_score_records(const std::string& records_path);
int cmd_plot(const std::string& log_path, const std::string& out_path);
int cmd_gen_town(int town_id, std::uint64_t seed, const std::string& out_path);
int cmd_config_show(const RunConfig& cfg);

}  // namespace middrive

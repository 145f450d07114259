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

#include <map>
#include <string>
#include <vector>

#include "middrive/benchmark.hpp"
#include "middrive/json_io.hpp"
#include "middrive/world.hpp"

namespace middrive {

struct EmptySuiteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroDistanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Multiplicative penalty per infraction. Deviation/blockage terminate the
/// episode and cap RC instead; offroad discounts RC by the offroad distance
/// fraction.
struct PenaltyConfig {
  double pedestrian_collision = 0.50;
  double vehicle_collision = 0.60;
  double layout_collision = 0.65;
  double red_light_violation = 0.70;
  double stop_sign_violation = 0.80;
};

struct RouteResult {
  std::string route_name;
  double rc = 0.0;   // percent [0, 100]
  double is_ = 1.0;  // factor [0, 1]
  double ds = 0.0;   // percent, exactly rc * is_
  std::map<InfractionKind, int> infraction_counts;
  double distance_km = 0.0;
  Termination termination = Termination::Timeout;
};

/// Percent of the planned route completed; freezes where a deviated episode
/// left off, and progress past the completion threshold reports 100.
double route_completion(const EpisodeLog& log, double completion_threshold = 0.99);

/// Product of the penalty coefficients of the scoring infractions.
double infraction_score(const std::vector<InfractionEvent>& events,
                        const PenaltyConfig& penalties = {});

RouteResult score_route(const EpisodeLog& log, const PenaltyConfig& penalties = {});

struct SuiteAggregate {
  double ds = 0.0;
  double rc = 0.0;
  double is_ = 0.0;
};

/// Per-suite means of the per-route scores. Throws EmptySuiteError.
SuiteAggregate driving_score(const std::vector<RouteResult>& results);

/// Per-kilometre rates for VC / PC / LC / RV / OI. Throws ZeroDistanceError
/// when no distance was driven.
std::map<std::string, double> infraction_rates(const std::vector<EpisodeLog>& logs);

// Report rendering.
std::string render_table(const std::vector<RouteResult>& results, const SuiteAggregate& agg);
std::string render_csv(const std::vector<RouteResult>& results);
Json summary_json(const std::string& suite_name, const std::string& config_hash,
                  const std::vector<RouteResult>& results, const SuiteAggregate& agg,
                  const std::map<std::string, double>& rates);

}  // namespace middrive

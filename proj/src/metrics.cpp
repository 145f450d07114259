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

#include "middrive/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace middrive {

double route_completion(const EpisodeLog& log, double completion_threshold) {
  double rc = log.final_progress >= completion_threshold ? 100.0 : 100.0 * log.final_progress;
  if (log.distance_driven_m > 0.0 && log.offroad_distance_m > 0.0) {
    rc *= 1.0 - std::min(1.0, log.offroad_distance_m / log.distance_driven_m);
  }
  return rc;
}

double infraction_score(const std::vector<InfractionEvent>& events,
                        const PenaltyConfig& penalties) {
  double score = 1.0;
  for (const InfractionEvent& e : events) {
    switch (e.kind) {
      case InfractionKind::PedestrianCollision: score *= penalties.pedestrian_collision; break;
      case InfractionKind::VehicleCollision: score *= penalties.vehicle_collision; break;
      case InfractionKind::LayoutCollision: score *= penalties.layout_collision; break;
      case InfractionKind::RedLightViolation: score *= penalties.red_light_violation; break;
      case InfractionKind::StopSignViolation: score *= penalties.stop_sign_violation; break;
      case InfractionKind::OffroadInfraction:
      case InfractionKind::RouteDeviation:
      case InfractionKind::Blocked:
        break;  // handled through RC / termination
    }
  }
  return score;
}

RouteResult score_route(const EpisodeLog& log, const PenaltyConfig& penalties) {
  RouteResult r;
  r.route_name = log.route_name;
  r.termination = log.termination;
  const std::vector<InfractionEvent> events = log.all_infractions();
  r.rc = route_completion(log);
  r.is_ = infraction_score(events, penalties);
  r.ds = r.rc * r.is_;
  for (const InfractionEvent& e : events) r.infraction_counts[e.kind]++;
  r.distance_km = log.distance_driven_m / 1000.0;
  return r;
}

SuiteAggregate driving_score(const std::vector<RouteResult>& results) {
  if (results.empty()) throw EmptySuiteError("no routes to aggregate");
  SuiteAggregate agg;
  for (const RouteResult& r : results) {
    agg.ds += r.rc * r.is_;
    agg.rc += r.rc;
    agg.is_ += r.is_;
  }
  const double n = static_cast<double>(results.size());
  agg.ds /= n;
  agg.rc /= n;
  agg.is_ /= n;
  return agg;
}

std::map<std::string, double> infraction_rates(const std::vector<EpisodeLog>& logs) {
  double total_km = 0.0;
  std::map<InfractionKind, int> counts;
  for (const EpisodeLog& log : logs) {
    total_km += log.distance_driven_m / 1000.0;
    for (const InfractionEvent& e : log.all_infractions()) counts[e.kind]++;
  }
  if (total_km <= 0.0) throw ZeroDistanceError("no distance driven");

  std::map<std::string, double> rates;
  rates["VC"] = counts[InfractionKind::VehicleCollision] / total_km;
  rates["PC"] = counts[InfractionKind::PedestrianCollision] / total_km;
  rates["LC"] = counts[InfractionKind::LayoutCollision] / total_km;
  rates["RV"] = counts[InfractionKind::RedLightViolation] / total_km;
  rates["OI"] = counts[InfractionKind::OffroadInfraction] / total_km;
  return rates;
}

std::string render_table(const std::vector<RouteResult>& results, const SuiteAggregate& agg) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-18s %8s %8s %8s  %s\n", "route", "DS", "RC", "IS",
                "termination");
  out << buf;
  out << std::string(58, '-') << '\n';
  for (const RouteResult& r : results) {
    std::snprintf(buf, sizeof(buf), "%-18s %8.1f %8.1f %8.2f  %s\n", r.route_name.c_str(),
                  r.ds, r.rc, r.is_, to_string(r.termination));
    out << buf;
  }
  out << std::string(58, '-') << '\n';
  std::snprintf(buf, sizeof(buf), "%-18s %8.1f %8.1f %8.2f\n", "suite mean", agg.ds, agg.rc,
                agg.is_);
  out << buf;
  return out.str();
}

std::string render_csv(const std::vector<RouteResult>& results) {
  std::ostringstream out;
  out << "route,ds,rc,is,termination,distance_km\n";
  for (const RouteResult& r : results) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%s,%.6f\n", r.route_name.c_str(),
                  r.ds, r.rc, r.is_, to_string(r.termination), r.distance_km);
    out << buf;
  }
  return out.str();
}

Json summary_json(const std::string& suite_name, const std::string& config_hash,
                  const std::vector<RouteResult>& results, const SuiteAggregate& agg,
                  const std::map<std::string, double>& rates) {
  Json j;
  j["suite"] = suite_name;
  j["config_hash"] = config_hash;
  j["ds"] = agg.ds;
  j["rc"] = agg.rc;
  j["is"] = agg.is_;
  Json rate_obj;
  for (const auto& [k, v] : rates) rate_obj[k] = v;
  j["infraction_rates_per_km"] = rate_obj;
  Json routes = Json::array();
  for (const RouteResult& r : results) {
    Json rr;
    rr["route"] = r.route_name;
    rr["ds"] = r.ds;
    rr["rc"] = r.rc;
    rr["is"] = r.is_;
    rr["termination"] = to_string(r.termination);
    rr["distance_km"] = r.distance_km;
    Json counts;
    for (const auto& [kind, n] : r.infraction_counts) counts[to_string(kind)] = n;
    rr["infractions"] = counts;
    routes.push_back(rr);
  }
  j["routes"] = routes;
  return j;
}

}  // namespace middrive

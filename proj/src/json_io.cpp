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

#include "middrive/json_io.hpp"

namespace middrive {

const char* to_string(TurnDirection d) {
  switch (d) {
    case TurnDirection::Straight: return "straight";
    case TurnDirection::Left: return "left";
    case TurnDirection::Right: return "right";
  }
  return "straight";
}

TurnDirection turn_direction_from_string(const std::string& s) {
  if (s == "left") return TurnDirection::Left;
  if (s == "right") return TurnDirection::Right;
  return TurnDirection::Straight;
}

Json to_json(const TelemetryFrame& f) {
  Json j;
  j["speed_mps"] = f.speed_mps;
  j["target_speed_mps"] = f.target_speed_mps;
  j["applied_steer"] = f.applied_steer;
  j["applied_brake"] = f.applied_brake;
  j["junction_distance_m"] = f.junction_distance_m ? Json(*f.junction_distance_m) : Json(nullptr);
  j["vehicles_ahead"] = f.vehicles_ahead;
  j["vehicles_at_junction"] = f.vehicles_at_junction;
  j["vehicles_in_lane"] = f.vehicles_in_lane;
  j["bikes_ahead"] = f.bikes_ahead;
  j["pedestrians_ahead"] = f.pedestrians_ahead;
  j["red_light_ahead"] = f.red_light_ahead;
  j["red_light_distance_m"] = f.red_light_distance_m;
  j["stop_sign_ahead"] = f.stop_sign_ahead;
  j["stop_sign_distance_m"] = f.stop_sign_distance_m;
  j["nearest_pedestrian_m"] = f.nearest_pedestrian_m ? Json(*f.nearest_pedestrian_m) : Json(nullptr);
  j["lead_vehicle_gap_m"] = f.lead_vehicle_gap_m ? Json(*f.lead_vehicle_gap_m) : Json(nullptr);
  j["lateral_offset_m"] = f.lateral_offset_m;
  j["heading_error_rad"] = f.heading_error_rad;
  j["next_turn"] = to_string(f.next_turn);
  j["next_turn_distance_m"] = f.next_turn_distance_m;
  return j;
}

TelemetryFrame telemetry_from_json(const Json& j) {
  TelemetryFrame f;
  f.speed_mps = j.at("speed_mps").get<double>();
  f.target_speed_mps = j.at("target_speed_mps").get<double>();
  f.applied_steer = j.at("applied_steer").get<double>();
  f.applied_brake = j.at("applied_brake").get<double>();
  if (!j.at("junction_distance_m").is_null())
    f.junction_distance_m = j.at("junction_distance_m").get<double>();
  f.vehicles_ahead = j.at("vehicles_ahead").get<int>();
  f.vehicles_at_junction = j.at("vehicles_at_junction").get<int>();
  f.vehicles_in_lane = j.at("vehicles_in_lane").get<int>();
  f.bikes_ahead = j.at("bikes_ahead").get<int>();
  f.pedestrians_ahead = j.at("pedestrians_ahead").get<int>();
  f.red_light_ahead = j.at("red_light_ahead").get<bool>();
  f.red_light_distance_m = j.at("red_light_distance_m").get<double>();
  f.stop_sign_ahead = j.at("stop_sign_ahead").get<bool>();
  f.stop_sign_distance_m = j.at("stop_sign_distance_m").get<double>();
  if (!j.at("nearest_pedestrian_m").is_null())
    f.nearest_pedestrian_m = j.at("nearest_pedestrian_m").get<double>();
  if (!j.at("lead_vehicle_gap_m").is_null())
    f.lead_vehicle_gap_m = j.at("lead_vehicle_gap_m").get<double>();
  f.lateral_offset_m = j.at("lateral_offset_m").get<double>();
  f.heading_error_rad = j.at("heading_error_rad").get<double>();
  f.next_turn = turn_direction_from_string(j.at("next_turn").get<std::string>());
  f.next_turn_distance_m = j.at("next_turn_distance_m").get<double>();
  return f;
}

Json to_json(const Waypoints& wp) {
  Json arr = Json::array();
  for (const EgoPoint& p : wp.points) arr.push_back({p.lateral_m, p.longitudinal_m});
  return arr;
}

Waypoints waypoints_from_json(const Json& j) {
  Waypoints wp;
  if (!j.is_array() || j.size() != Waypoints::kCount)
    throw std::runtime_error("waypoints must be an array of 5 [x, y] pairs");
  for (std::size_t i = 0; i < Waypoints::kCount; ++i) {
    wp.points[i].lateral_m = j[i].at(0).get<double>();
    wp.points[i].longitudinal_m = j[i].at(1).get<double>();
  }
  return wp;
}

Json to_json(const ControlSignal& c) {
  Json j;
  j["throttle"] = c.throttle;
  j["steer"] = c.steer;
  j["brake"] = c.brake;
  return j;
}

ControlSignal control_from_json(const Json& j) {
  ControlSignal c;
  c.throttle = j.at("throttle").get<double>();
  c.steer = j.at("steer").get<double>();
  c.brake = j.at("brake").get<double>();
  return c;
}

Json to_json(const InfractionEvent& e) {
  Json j;
  j["tick"] = e.tick;
  j["kind"] = to_string(e.kind);
  j["x_m"] = e.position.x;
  j["y_m"] = e.position.y;
  j["actor_id"] = e.actor_id;
  return j;
}

InfractionEvent infraction_from_json(const Json& j) {
  InfractionEvent e;
  e.tick = j.at("tick").get<long>();
  const std::string kind = j.at("kind").get<std::string>();
  for (int k = 0; k <= static_cast<int>(InfractionKind::Blocked); ++k) {
    if (kind == to_string(static_cast<InfractionKind>(k))) {
      e.kind = static_cast<InfractionKind>(k);
      break;
    }
  }
  e.position = {j.at("x_m").get<double>(), j.at("y_m").get<double>()};
  e.actor_id = j.at("actor_id").get<int>();
  return e;
}

Json to_json(const Route& r) {
  Json j;
  j["name"] = r.name;
  j["town_id"] = r.town_id;
  j["length_m"] = r.length_m;
  Json poly = Json::array();
  for (const Vec2& p : r.polyline) poly.push_back({p.x, p.y});
  j["polyline_m"] = poly;
  j["junctions_m"] = r.junctions_m;
  Json turns = Json::array();
  for (const Route::Turn& t : r.turns) {
    turns.push_back({{"arclength_m", t.arclength_m},
                     {"direction", to_string(t.direction)},
                     {"angle_rad", t.angle_rad}});
  }
  j["turns"] = turns;
  Json marks = Json::array();
  for (const Route::Landmark& l : r.landmarks)
    marks.push_back({{"arclength_m", l.arclength_m}, {"tag", l.tag}});
  j["landmarks"] = marks;
  return j;
}

Route route_from_json(const Json& j) {
  Route r;
  r.name = j.at("name").get<std::string>();
  r.town_id = j.at("town_id").get<int>();
  for (const Json& p : j.at("polyline_m"))
    r.polyline.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  finalize_route_polyline(r);
  for (const Json& js : j.at("junctions_m")) r.junctions_m.push_back(js.get<double>());
  for (const Json& t : j.at("turns")) {
    r.turns.push_back({t.at("arclength_m").get<double>(),
                       turn_direction_from_string(t.at("direction").get<std::string>()),
                       t.at("angle_rad").get<double>()});
  }
  for (const Json& l : j.at("landmarks"))
    r.landmarks.push_back({l.at("arclength_m").get<double>(), l.at("tag").get<std::string>()});
  return r;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace middrive

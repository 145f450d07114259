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

#include "middrive/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace middrive {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double wrap_angle(double rad) {
  double a = std::remainder(rad, 2.0 * M_PI);
  if (a <= -M_PI) a = M_PI;
  return a;
}

namespace {

double actor_radius(ActorKind kind, const SimParams& p) {
  switch (kind) {
    case ActorKind::Vehicle: return p.vehicle_radius_m;
    case ActorKind::Pedestrian: return p.pedestrian_radius_m;
    case ActorKind::Bike: return p.bike_radius_m;
  }
  return p.vehicle_radius_m;
}

bool circles_overlap(Vec2 a, double ra, Vec2 b, double rb) {
  const double d = norm(a - b);
  return d < ra + rb;
}

Vec2 heading_dir(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Signal's stop line projected on the route; absent when the signal sits far
/// from the route.
std::optional<Route::Projection> signal_line(const Route& route, const SignalState& sig) {
  Route::Projection proj = route.project(sig.position);
  if (proj.lateral_m > 8.0) return std::nullopt;
  return proj;
}

bool red_light_within(const WorldState& state, double range, const SimParams& params) {
  for (const SignalState& sig : state.signals) {
    if (sig.kind != SignalKind::TrafficLight) continue;
    if (sig.phase != LightPhase::Red) continue;
    const auto line = signal_line(state.route, sig);
    if (!line) continue;
    const double ahead = line->arclength_m - state.progress_m;
    if (ahead >= 0.0 && ahead <= range) return true;
  }
  (void)params;
  return false;
}

}  // namespace

double finalize_route_polyline(Route& route) {
  route.cumulative_m.assign(route.polyline.size(), 0.0);
  for (std::size_t i = 1; i < route.polyline.size(); ++i) {
    route.cumulative_m[i] =
        route.cumulative_m[i - 1] + norm(route.polyline[i] - route.polyline[i - 1]);
  }
  route.length_m = route.cumulative_m.empty() ? 0.0 : route.cumulative_m.back();
  return route.length_m;
}

Vec2 Route::point_at(double s) const {
  if (polyline.empty()) return {};
  if (s <= 0.0) return polyline.front();
  if (s >= length_m) return polyline.back();
  const auto it = std::upper_bound(cumulative_m.begin(), cumulative_m.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_m.begin());
  const double seg = cumulative_m[i] - cumulative_m[i - 1];
  const double t = seg > 0.0 ? (s - cumulative_m[i - 1]) / seg : 0.0;
  return polyline[i - 1] + t * (polyline[i] - polyline[i - 1]);
}

double Route::tangent_heading_at(double s) const {
  if (polyline.size() < 2) return 0.0;
  std::size_t i = 1;
  if (s > 0.0) {
    const auto it = std::upper_bound(cumulative_m.begin(), cumulative_m.end(),
                                     std::min(s, length_m - 1e-9));
    i = std::min(static_cast<std::size_t>(it - cumulative_m.begin()), polyline.size() - 1);
  }
  const Vec2 d = polyline[i] - polyline[i - 1];
  return std::atan2(d.y, d.x);
}

Route::Projection Route::project(Vec2 p) const {
  return project_near(p, 0.0, std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity());
}

Route::Projection Route::project_near(Vec2 p, double s_hint, double back_m,
                                      double forward_m) const {
  Projection best;
  best.lateral_m = std::numeric_limits<double>::infinity();
  const double lo = s_hint - back_m;
  const double hi = s_hint + forward_m;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    if (cumulative_m[i] < lo || cumulative_m[i - 1] > hi) continue;
    const Vec2 a = polyline[i - 1];
    const Vec2 b = polyline[i];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = a + t * ab;
    const double d = norm(p - q);
    if (d < best.lateral_m) {
      best.lateral_m = d;
      best.arclength_m = cumulative_m[i - 1] + t * std::sqrt(len2);
      // cross > 0 means p is left of the segment direction
      best.signed_lateral_m = cross(ab, p - q) > 0.0 ? -d : d;
    }
  }
  if (!std::isfinite(best.lateral_m)) best = Projection{};
  return best;
}

const char* to_string(InfractionKind k) {
  switch (k) {
    case InfractionKind::VehicleCollision: return "vehicle_collision";
    case InfractionKind::PedestrianCollision: return "pedestrian_collision";
    case InfractionKind::LayoutCollision: return "layout_collision";
    case InfractionKind::RedLightViolation: return "red_light_violation";
    case InfractionKind::OffroadInfraction: return "offroad_infraction";
    case InfractionKind::StopSignViolation: return "stop_sign_violation";
    case InfractionKind::RouteDeviation: return "route_deviation";
    case InfractionKind::Blocked: return "blocked";
  }
  return "unknown";
}

WorldState make_world(Route route, std::vector<Actor> actors,
                      std::vector<SignalState> signals, std::uint64_t rng_seed) {
  WorldState s;
  s.route = std::move(route);
  s.actors = std::move(actors);
  s.signals = std::move(signals);
  s.rng_seed = rng_seed;
  if (!s.route.polyline.empty()) {
    s.ego.position = s.route.polyline.front();
    s.ego.heading_rad = s.route.tangent_heading_at(0.0);
  }
  const Route::Projection proj = s.route.project(s.ego.position);
  s.progress_m = proj.arclength_m;
  s.lateral_offset_m = proj.signed_lateral_m;
  return s;
}

WorldState step(const WorldState& state, const ControlSignal& control, double dt,
                const SimParams& params) {
  WorldState next = state;
  next.tick = state.tick + 1;
  next.time_s = static_cast<double>(next.tick) * dt;
  next.last_control = control;

  // Ego: kinematic bicycle. Heading rate uses the speed at tick start.
  // Heading is CCW-positive while steer > 0 means right, hence the minus.
  const EgoState& ego = state.ego;
  const double accel = params.accel_max_mps2 * control.throttle -
                       params.brake_max_mps2 * control.brake -
                       params.drag_per_s * ego.speed_mps;
  const double new_speed =
      std::clamp(ego.speed_mps + accel * dt, 0.0, params.speed_max_mps);
  const double steer_angle = params.steer_max_rad * control.steer;
  const double heading_rate = -ego.speed_mps / ego.wheelbase_m * std::tan(steer_angle);
  const double new_heading = wrap_angle(ego.heading_rad + heading_rate * dt);

  next.ego.speed_mps = new_speed;
  next.ego.heading_rad = new_heading;
  next.ego.position = ego.position + (new_speed * dt) * heading_dir(new_heading);

  // NPC actors.
  for (Actor& a : next.actors) {
    switch (a.behavior) {
      case ActorBehavior::Stationary:
        break;
      case ActorBehavior::ConstantVelocity:
        a.position = a.position + (a.speed_mps * dt) * heading_dir(a.heading_rad);
        break;
      case ActorBehavior::SignalCompliant: {
        bool hold = false;
        const Vec2 dir = heading_dir(a.heading_rad);
        for (const SignalState& sig : state.signals) {
          if (sig.kind != SignalKind::TrafficLight || sig.phase != LightPhase::Red)
            continue;
          const Vec2 rel = sig.position - a.position;
          const double ahead = dot(dir, rel);
          if (ahead > 0.0 && ahead < 12.0 && std::abs(cross(dir, rel)) < 5.0) {
            hold = true;
            break;
          }
        }
        if (!hold) a.position = a.position + (a.speed_mps * dt) * heading_dir(a.heading_rad);
        break;
      }
      case ActorBehavior::ScriptedCrossing:
        // Starts walking once the ego approaches.
        if (norm(state.ego.position - a.position) < 25.0)
          a.position = a.position + (a.speed_mps * dt) * heading_dir(a.heading_rad);
        break;
    }
  }

  // Progress bookkeeping (windowed projection, monotone high-water arclength).
  const Route::Projection proj =
      next.route.project_near(next.ego.position, state.progress_m, 15.0, 25.0);
  next.progress_m = std::max(state.progress_m, proj.arclength_m);
  next.lateral_offset_m = proj.signed_lateral_m;

  // Traffic light phases alternate every cycle_s.
  for (SignalState& sig : next.signals) {
    if (sig.kind == SignalKind::TrafficLight && sig.phase && sig.cycle_s > 0.0) {
      const long prev_n = static_cast<long>(std::floor(state.time_s / sig.cycle_s));
      const long next_n = static_cast<long>(std::floor(next.time_s / sig.cycle_s));
      if (((next_n - prev_n) & 1) != 0) {
        sig.phase = *sig.phase == LightPhase::Red ? LightPhase::Green : LightPhase::Red;
      }
    }
    if (sig.kind == SignalKind::StopSign && !sig.satisfied) {
      // Satisfied by coming to rest just before the stop line (along-route
      // distance; the sign itself stands off the kerb).
      if (next.ego.speed_mps < params.stop_sign_satisfy_speed) {
        const auto line = signal_line(next.route, sig);
        if (line) {
          const double gap = line->arclength_m - next.progress_m;
          if (gap <= params.stop_sign_satisfy_m && gap >= -3.0) sig.satisfied = true;
        }
      }
    }
  }

  if (next.ego.speed_mps < params.stopped_speed_mps) {
    next.stopped_since_s = state.stopped_since_s >= 0.0 ? state.stopped_since_s : next.time_s;
  } else {
    next.stopped_since_s = -1.0;
  }
  if (next.ego.speed_mps < params.stop_sign_satisfy_speed) {
    next.last_stop_time_s = next.time_s;
  }
  if (std::abs(next.lateral_offset_m) > params.corridor_halfwidth_m) {
    next.offroad_distance_m += new_speed * dt;
  }

  return next;
}

TelemetryFrame observe(const WorldState& state, const Instruction&,
                       const SimParams& params) {
  TelemetryFrame f;
  f.speed_mps = state.ego.speed_mps;
  f.target_speed_mps = params.target_speed_mps;
  f.applied_steer = state.last_control.steer;
  f.applied_brake = state.last_control.brake;

  const Vec2 fwd = heading_dir(state.ego.heading_rad);
  const double s_ego = state.progress_m;

  // Next junction along the route.
  for (double js : state.route.junctions_m) {
    const double ahead = js - s_ego;
    if (ahead >= 0.0 && ahead <= params.junction_report_m) {
      f.junction_distance_m = ahead;
      break;
    }
  }

  // Actors within the forward sensing cone.
  std::optional<Vec2> next_junction_pos;
  if (f.junction_distance_m)
    next_junction_pos = state.route.point_at(s_ego + *f.junction_distance_m);

  for (const Actor& a : state.actors) {
    const Vec2 rel = a.position - state.ego.position;
    const double dist = norm(rel);
    if (dist > params.sensing_range_m || dist < 1e-9) continue;
    const double bearing = std::abs(wrap_angle(std::atan2(rel.y, rel.x) - state.ego.heading_rad));
    if (bearing > params.sensing_half_angle_rad) continue;

    switch (a.kind) {
      case ActorKind::Vehicle: f.vehicles_ahead++; break;
      case ActorKind::Bike: f.bikes_ahead++; break;
      case ActorKind::Pedestrian: f.pedestrians_ahead++; break;
    }

    if (a.kind == ActorKind::Vehicle && next_junction_pos &&
        norm(a.position - *next_junction_pos) < params.junction_actor_radius_m) {
      f.vehicles_at_junction++;
    }

    // On-corridor hazards: actors standing on the driving path ahead.
    const Route::Projection ap = state.route.project_near(a.position, s_ego, 5.0, 60.0);
    const bool on_corridor = ap.lateral_m < params.corridor_halfwidth_m + 0.5 &&
                             ap.arclength_m > s_ego;
    if (!on_corridor) continue;
    const double gap = ap.arclength_m - s_ego;
    if (a.kind == ActorKind::Vehicle) {
      f.vehicles_in_lane++;
      if (!f.lead_vehicle_gap_m || gap < *f.lead_vehicle_gap_m) f.lead_vehicle_gap_m = gap;
    } else if (a.kind == ActorKind::Pedestrian) {
      if (!f.nearest_pedestrian_m || dist < *f.nearest_pedestrian_m)
        f.nearest_pedestrian_m = dist;
    }
  }
  (void)fwd;

  // Signals ahead along the route.
  for (const SignalState& sig : state.signals) {
    const auto line = signal_line(state.route, sig);
    if (!line) continue;
    const double ahead = line->arclength_m - s_ego;
    if (ahead < 0.0 || ahead > params.signal_range_m) continue;
    if (sig.kind == SignalKind::TrafficLight && sig.phase == LightPhase::Red) {
      if (!f.red_light_ahead || ahead < f.red_light_distance_m) {
        f.red_light_ahead = true;
        f.red_light_distance_m = ahead;
      }
    } else if (sig.kind == SignalKind::StopSign && !sig.satisfied) {
      if (!f.stop_sign_ahead || ahead < f.stop_sign_distance_m) {
        f.stop_sign_ahead = true;
        f.stop_sign_distance_m = ahead;
      }
    }
  }

  // Route-relative pose.
  f.lateral_offset_m = state.lateral_offset_m;
  f.heading_error_rad =
      wrap_angle(state.route.tangent_heading_at(s_ego) - state.ego.heading_rad);

  // Next turn.
  f.next_turn = TurnDirection::Straight;
  f.next_turn_distance_m = state.route.length_m - s_ego;
  for (const Route::Turn& t : state.route.turns) {
    const double ahead = t.arclength_m - s_ego;
    if (ahead >= 0.0) {
      if (ahead <= params.junction_report_m) {
        f.next_turn = t.direction;
        f.next_turn_distance_m = ahead;
      }
      break;
    }
  }
  return f;
}

std::vector<InfractionEvent> detect_infractions(const WorldState& prev,
                                                const WorldState& next,
                                                const SimParams& params) {
  std::vector<InfractionEvent> events;

  // Collisions (onset only). Actors matched by id across the transition.
  for (const Actor& a : next.actors) {
    const double r = actor_radius(a.kind, params);
    if (!circles_overlap(next.ego.position, params.ego_radius_m, a.position, r)) continue;
    bool was = false;
    for (const Actor& pa : prev.actors) {
      if (pa.id == a.id) {
        was = circles_overlap(prev.ego.position, params.ego_radius_m, pa.position, r);
        break;
      }
    }
    if (was) continue;
    InfractionEvent ev;
    ev.tick = next.tick;
    ev.position = a.position;
    ev.actor_id = a.id;
    switch (a.kind) {
      case ActorKind::Pedestrian: ev.kind = InfractionKind::PedestrianCollision; break;
      case ActorKind::Vehicle:
      case ActorKind::Bike: ev.kind = InfractionKind::VehicleCollision; break;
    }
    events.push_back(ev);
  }

  // Static layout: signal poles.
  for (const SignalState& sig : next.signals) {
    const bool now = circles_overlap(next.ego.position, params.ego_radius_m, sig.position,
                                     params.signal_pole_radius_m);
    if (!now) continue;
    bool was = false;
    for (const SignalState& ps : prev.signals) {
      if (ps.id == sig.id) {
        was = circles_overlap(prev.ego.position, params.ego_radius_m, ps.position,
                              params.signal_pole_radius_m);
        break;
      }
    }
    if (was) continue;
    events.push_back({next.tick, InfractionKind::LayoutCollision, sig.position, sig.id});
  }

  // Stop-line crossings.
  for (const SignalState& sig : prev.signals) {
    const auto line = signal_line(prev.route, sig);
    if (!line) continue;
    const double s_line = line->arclength_m;
    const bool crossed = prev.progress_m < s_line && next.progress_m >= s_line;
    if (!crossed) continue;
    if (sig.kind == SignalKind::TrafficLight && sig.phase == LightPhase::Red) {
      events.push_back({next.tick, InfractionKind::RedLightViolation, sig.position, sig.id});
    }
    if (sig.kind == SignalKind::StopSign && !sig.satisfied &&
        next.time_s - next.last_stop_time_s > params.stop_sign_cross_window_s) {
      events.push_back({next.tick, InfractionKind::StopSignViolation, sig.position, sig.id});
    }
  }

  // Corridor and deviation threshold crossings.
  const double prev_off = std::abs(prev.lateral_offset_m);
  const double next_off = std::abs(next.lateral_offset_m);
  if (prev_off <= params.corridor_halfwidth_m && next_off > params.corridor_halfwidth_m) {
    events.push_back({next.tick, InfractionKind::OffroadInfraction, next.ego.position, -1});
  }
  if (prev_off <= params.deviation_fail_m && next_off > params.deviation_fail_m) {
    events.push_back({next.tick, InfractionKind::RouteDeviation, next.ego.position, -1});
  }

  // Blocked: stationary past the timeout with no red light excusing it.
  if (next.stopped_since_s >= 0.0) {
    const double held = next.time_s - next.stopped_since_s;
    const double prev_held =
        prev.stopped_since_s >= 0.0 ? prev.time_s - prev.stopped_since_s : 0.0;
    if (held > params.blocked_timeout_s && prev_held <= params.blocked_timeout_s &&
        !red_light_within(next, params.signal_range_m, params)) {
      events.push_back({next.tick, InfractionKind::Blocked, next.ego.position, -1});
    }
  }

  std::sort(events.begin(), events.end(), [](const InfractionEvent& a, const InfractionEvent& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.actor_id < b.actor_id;
  });
  return events;
}

std::pair<double, double> route_progress(const WorldState& state) {
  if (state.route.length_m <= 0.0) return {0.0, 0.0};
  const double frac = std::clamp(state.progress_m / state.route.length_m, 0.0, 1.0);
  return {frac, std::abs(state.lateral_offset_m)};
}

}  // namespace middrive

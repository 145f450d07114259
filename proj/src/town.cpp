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

#include "middrive/town.hpp"

#include <algorithm>
#include <cmath>

namespace middrive {

namespace {

/// SplitMix64: tiny deterministic generator, identical on every platform.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double next_double() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  int next_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

std::uint64_t mix_seed(int town_id, std::uint64_t seed) {
  Rng r(seed ^ (0x517cc1b727220a95ULL * static_cast<std::uint64_t>(town_id + 1)));
  return r.next_u64();
}

constexpr double kCornerRadius = 10.0;
constexpr double kStraightStep = 4.0;
constexpr double kArcStep = 1.5;

struct GridSpec {
  int nx;
  int ny;
  double spacing;
};

GridSpec grid_spec(int town_id) {
  GridSpec g;
  g.nx = 5 + town_id % 3;
  g.ny = 4 + (town_id + 1) % 3;
  g.spacing = 85.0 + 6.0 * (town_id % 4);
  return g;
}

int node_index(const GridSpec& g, int ix, int iy) { return iy * g.nx + ix; }

/// Walk on the grid without immediate backtracking.
std::vector<int> random_walk(const GridSpec& g, Rng& rng, int steps) {
  int ix = rng.next_int(1, g.nx - 2);
  int iy = rng.next_int(1, g.ny - 2);
  std::vector<int> path{node_index(g, ix, iy)};
  int last_dir = -1;
  for (int s = 0; s < steps; ++s) {
    static constexpr int dx[4] = {1, -1, 0, 0};
    static constexpr int dy[4] = {0, 0, 1, -1};
    int dir = -1;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const int cand = rng.next_int(0, 3);
      if (last_dir >= 0 && (cand ^ 1) == last_dir) continue;  // no U-turn
      const int nx = ix + dx[cand];
      const int ny = iy + dy[cand];
      if (nx < 0 || nx >= g.nx || ny < 0 || ny >= g.ny) continue;
      dir = cand;
      break;
    }
    if (dir < 0) break;
    ix += dx[dir];
    iy += dy[dir];
    last_dir = dir;
    path.push_back(node_index(g, ix, iy));
  }
  return path;
}

void append_straight(std::vector<Vec2>& poly, Vec2 from, Vec2 to) {
  const double len = norm(to - from);
  const int n = std::max(1, static_cast<int>(std::ceil(len / kStraightStep)));
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    poly.push_back(from + t * (to - from));
  }
}

/// Quarter-circle corner between the incoming and outgoing street directions.
void append_arc(std::vector<Vec2>& poly, Vec2 corner, Vec2 in_dir, Vec2 out_dir,
                double radius) {
  const Vec2 entry = corner - radius * in_dir;
  const Vec2 exit = corner + radius * out_dir;
  // Arc center sits perpendicular to the entry direction, on the turn side.
  const double turn = cross(in_dir, out_dir) > 0.0 ? 1.0 : -1.0;  // +1 = left
  const Vec2 center = entry + radius * Vec2{-turn * in_dir.y, turn * in_dir.x};
  const double a0 = std::atan2(entry.y - center.y, entry.x - center.x);
  const double a1 = std::atan2(exit.y - center.y, exit.x - center.x);
  double sweep = wrap_angle(a1 - a0);
  const int n = std::max(2, static_cast<int>(std::ceil(std::abs(sweep) * radius / kArcStep)));
  for (int i = 1; i <= n; ++i) {
    const double a = a0 + sweep * static_cast<double>(i) / n;
    poly.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
  }
}

Route build_route(const TownMap& town, const std::vector<int>& nodes,
                  int town_id, const std::string& name) {
  Route route;
  route.town_id = town_id;
  route.name = name;

  std::vector<Vec2> pts;
  for (int n : nodes) pts.push_back(town.nodes[static_cast<std::size_t>(n)].position);

  route.polyline.push_back(pts.front());
  struct Pending {
    std::size_t poly_index;
    TurnDirection dir;
    double angle;
    int node;
  };
  std::vector<Pending> pending_turns;
  std::vector<std::pair<std::size_t, int>> pending_junctions;  // poly index, node id

  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec2 prev = route.polyline.back();
    if (i + 1 < pts.size()) {
      const Vec2 in_vec = pts[i] - pts[i - 1];
      const Vec2 out_vec = pts[i + 1] - pts[i];
      const Vec2 in_dir = (1.0 / norm(in_vec)) * in_vec;
      const Vec2 out_dir = (1.0 / norm(out_vec)) * out_vec;
      const double turn_angle = wrap_angle(std::atan2(out_dir.y, out_dir.x) -
                                           std::atan2(in_dir.y, in_dir.x));
      if (std::abs(turn_angle) > 0.35) {
        append_straight(route.polyline, prev, pts[i] - kCornerRadius * in_dir);
        const std::size_t before_arc = route.polyline.size() - 1;
        append_arc(route.polyline, pts[i], in_dir, out_dir, kCornerRadius);
        const std::size_t mid = (before_arc + route.polyline.size()) / 2;
        pending_turns.push_back({mid, turn_angle > 0.0 ? TurnDirection::Left : TurnDirection::Right,
                                 turn_angle, nodes[i]});
        pending_junctions.push_back({mid, nodes[i]});
        continue;
      }
      append_straight(route.polyline, prev, pts[i]);
      pending_junctions.push_back({route.polyline.size() - 1, nodes[i]});
      continue;
    }
    append_straight(route.polyline, prev, pts[i]);
  }

  // Drop accidental duplicate points so consecutive points stay distinct.
  auto last = std::unique(route.polyline.begin(), route.polyline.end(),
                          [](Vec2 a, Vec2 b) { return norm(a - b) < 1e-9; });
  route.polyline.erase(last, route.polyline.end());
  finalize_route_polyline(route);

  for (const auto& [idx, node] : pending_junctions) {
    const std::size_t clamped = std::min(idx, route.cumulative_m.size() - 1);
    route.junctions_m.push_back(route.cumulative_m[clamped]);
    const std::string& tag = town.nodes[static_cast<std::size_t>(node)].landmark;
    if (!tag.empty()) route.landmarks.push_back({route.cumulative_m[clamped], tag});
  }
  for (const Pending& p : pending_turns) {
    const std::size_t clamped = std::min(p.poly_index, route.cumulative_m.size() - 1);
    route.turns.push_back({route.cumulative_m[clamped], p.dir, p.angle});
  }
  std::sort(route.junctions_m.begin(), route.junctions_m.end());
  std::sort(route.turns.begin(), route.turns.end(),
            [](const Route::Turn& a, const Route::Turn& b) {
              return a.arclength_m < b.arclength_m;
            });
  return route;
}

/// Calm scripted traffic: parked vehicles and idle pedestrians off the
/// corridor, plus sparse signals ahead of junctions.
RouteScenario build_scenario(Route route, Rng& rng, const SimParams& params) {
  RouteScenario sc;
  sc.route = std::move(route);
  int next_id = 1;

  for (double js : sc.route.junctions_m) {
    if (js < 25.0 || js > sc.route.length_m - 10.0) continue;
    const double roll = rng.next_double();
    if (roll < 0.25) {
      SignalState sig;
      sig.id = next_id++;
      sig.kind = SignalKind::TrafficLight;
      const double s_line = js - 8.0;
      const Vec2 p = sc.route.point_at(s_line);
      const double h = sc.route.tangent_heading_at(s_line);
      sig.position = p + 4.0 * Vec2{std::sin(h), -std::cos(h)};  // right-hand kerb
      // Green first so calm suites are not timing lotteries.
      sig.phase = LightPhase::Green;
      sig.cycle_s = sc.route.length_m < 150.0 ? 30.0 : 18.0 + 3.0 * rng.next_int(0, 3);
      sc.signals.push_back(sig);
    } else if (roll < 0.45) {
      SignalState sig;
      sig.id = next_id++;
      sig.kind = SignalKind::StopSign;
      const double s_line = js - 8.0;
      const Vec2 p = sc.route.point_at(s_line);
      const double h = sc.route.tangent_heading_at(s_line);
      sig.position = p + 4.0 * Vec2{std::sin(h), -std::cos(h)};
      sc.signals.push_back(sig);
    }
  }

  // Kerbside props must clear the corridor everywhere, not just at the
  // segment they were placed from: corners bend the corridor toward them.
  auto clears_corridor = [&](Vec2 pos) {
    return sc.route.project(pos).lateral_m > params.corridor_halfwidth_m + 1.0;
  };

  const int parked = rng.next_int(0, 3);
  for (int i = 0; i < parked; ++i) {
    const double s = 20.0 + rng.next_double() * std::max(1.0, sc.route.length_m - 40.0);
    const double side = rng.next_double() < 0.5 ? 1.0 : -1.0;
    const double h = sc.route.tangent_heading_at(s);
    Actor a;
    a.id = 100 + next_id++;
    a.kind = ActorKind::Vehicle;
    a.position = sc.route.point_at(s) +
                 (params.corridor_halfwidth_m + 3.0) * side * Vec2{std::sin(h), -std::cos(h)};
    a.heading_rad = h;
    a.behavior = ActorBehavior::Stationary;
    if (clears_corridor(a.position)) sc.actors.push_back(a);
  }
  const int walkers = rng.next_int(0, 2);
  for (int i = 0; i < walkers; ++i) {
    const double s = 15.0 + rng.next_double() * std::max(1.0, sc.route.length_m - 30.0);
    const double side = rng.next_double() < 0.5 ? 1.0 : -1.0;
    const double h = sc.route.tangent_heading_at(s);
    Actor a;
    a.id = 200 + next_id++;
    a.kind = ActorKind::Pedestrian;
    a.position = sc.route.point_at(s) +
                 (params.corridor_halfwidth_m + 2.5) * side * Vec2{std::sin(h), -std::cos(h)};
    a.heading_rad = h;
    a.behavior = ActorBehavior::Stationary;
    if (clears_corridor(a.position)) sc.actors.push_back(a);
  }
  return sc;
}

}  // namespace

const char* to_string(LengthClass c) {
  switch (c) {
    case LengthClass::Tiny: return "tiny";
    case LengthClass::Short: return "short";
    case LengthClass::Long: return "long";
  }
  return "tiny";
}

std::optional<LengthClass> length_class_from_string(const std::string& s) {
  if (s == "tiny") return LengthClass::Tiny;
  if (s == "short") return LengthClass::Short;
  if (s == "long") return LengthClass::Long;
  return std::nullopt;
}

const std::vector<RouteScenario>& TownMap::pool(LengthClass c) const {
  switch (c) {
    case LengthClass::Tiny: return tiny_routes;
    case LengthClass::Short: return short_routes;
    case LengthClass::Long: return long_routes;
  }
  return tiny_routes;
}

const std::vector<std::string>& landmark_vocabulary() {
  static const std::vector<std::string> kTags = {
      "a turning point with palm trees",
      "a cornfield",
      "an open space with some parked vehicles",
      "grid lines on the ground",
      "a bus stop",
      "a row of shops",
  };
  return kTags;
}

TownMap generate_town(int town_id, std::uint64_t seed) {
  if (town_id < 1 || town_id > 8) throw TownError("town_id must be in [1, 8]");

  TownMap town;
  town.town_id = town_id;
  town.seed = seed;
  Rng rng(mix_seed(town_id, seed));
  const GridSpec g = grid_spec(town_id);

  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      TownMap::Node node;
      node.position = {ix * g.spacing, iy * g.spacing};
      if (rng.next_double() < 0.3) {
        const auto& vocab = landmark_vocabulary();
        node.landmark = vocab[rng.next_u64() % vocab.size()];
      }
      town.nodes.push_back(node);
    }
  }
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix + 1 < g.nx; ++ix)
      town.edges.push_back({node_index(g, ix, iy), node_index(g, ix + 1, iy)});
  for (int iy = 0; iy + 1 < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      town.edges.push_back({node_index(g, ix, iy), node_index(g, ix, iy + 1)});

  const SimParams params;

  // Keep the leading stretch of a route, carrying markers that survive.
  auto truncate_route = [](const Route& route, double keep_m) {
    Route trimmed;
    trimmed.town_id = route.town_id;
    for (std::size_t i = 0; i < route.polyline.size(); ++i) {
      if (route.cumulative_m[i] > keep_m && trimmed.polyline.size() >= 2) break;
      trimmed.polyline.push_back(route.polyline[i]);
    }
    finalize_route_polyline(trimmed);
    for (double js : route.junctions_m)
      if (js <= trimmed.length_m) trimmed.junctions_m.push_back(js);
    for (const Route::Turn& t : route.turns)
      if (t.arclength_m <= trimmed.length_m) trimmed.turns.push_back(t);
    for (const Route::Landmark& l : route.landmarks)
      if (l.arclength_m <= trimmed.length_m) trimmed.landmarks.push_back(l);
    return trimmed;
  };

  auto make_pool = [&](LengthClass cls, int want, int walk_steps,
                       std::vector<RouteScenario>& out) {
    int guard = 0;
    while (static_cast<int>(out.size()) < want && guard++ < 2000) {
      // Alternate straight and one-corner walks for the tiny pool.
      const int steps = cls == LengthClass::Tiny
                            ? (static_cast<int>(out.size()) % 2 == 0 ? 1 : 2)
                            : walk_steps;
      const std::vector<int> nodes = random_walk(g, rng, steps);
      if (nodes.size() < 2) continue;
      Route route = build_route(town, nodes, town_id, "");
      bool ok = false;
      switch (cls) {
        case LengthClass::Tiny:
          if (route.length_m >= 150.0) route = truncate_route(route, 120.0);
          ok = route.length_m > 40.0 && route.length_m < 150.0;
          break;
        case LengthClass::Short:
          ok = route.length_m >= 150.0 && route.length_m <= 500.0;
          break;
        case LengthClass::Long:
          ok = route.length_m > 500.0;
          break;
      }
      if (!ok) continue;
      route.name = "t" + std::to_string(town_id) + "-" + to_string(cls) +
                   std::to_string(out.size());
      out.push_back(build_scenario(std::move(route), rng, params));
    }
    if (static_cast<int>(out.size()) < want)
      throw TownError("route pool generation failed for town " + std::to_string(town_id));
  };

  make_pool(LengthClass::Tiny, 12, 1, town.tiny_routes);
  make_pool(LengthClass::Short, 10, 4, town.short_routes);
  make_pool(LengthClass::Long, 6, 9, town.long_routes);
  return town;
}

}  // namespace middrive

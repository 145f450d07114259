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
#include <vector>

#include "middrive/world.hpp"

namespace middrive {

enum class LengthClass { Tiny, Short, Long };  // <150 m, 150-500 m, >500 m
const char* to_string(LengthClass c);
std::optional<LengthClass> length_class_from_string(const std::string& s);

/// A route together with its scripted traffic.
struct RouteScenario {
  Route route;
  std::vector<Actor> actors;
  std::vector<SignalState> signals;
};

/// Procedurally generated town: a street grid with curved corners, a pool of
/// routes per length class, and per-route scenario placements. Fully
/// determined by (town_id, seed).
struct TownMap {
  int town_id = 0;
  std::uint64_t seed = 0;

  struct Node {
    Vec2 position;
    std::string landmark;  // empty for unremarkable junctions
  };
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> edges;

  std::vector<RouteScenario> tiny_routes;
  std::vector<RouteScenario> short_routes;
  std::vector<RouteScenario> long_routes;

  const std::vector<RouteScenario>& pool(LengthClass c) const;
};

/// town_id in [1, 8]. Same (town_id, seed) yields identical output.
TownMap generate_town(int town_id, std::uint64_t seed);

/// Landmark phrases available to towns and long-horizon cue templates.
const std::vector<std::string>& landmark_vocabulary();

struct TownError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace middrive

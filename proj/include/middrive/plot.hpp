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

#include <string>

#include "middrive/benchmark.hpp"

namespace middrive {

/// Overhead SVG trace: the route polyline, the driven ego path, waypoint
/// markers at decision frames, and infraction flags.
std::string render_episode_svg(const EpisodeLog& log, const Route& route);

}  // namespace middrive

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

#include "middrive/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace middrive {

namespace {

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Vec2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_episode_svg(const EpisodeLog& log, const Route& route) {
  Bounds b;
  for (const Vec2& p : route.polyline) b.add(p);
  for (const TickRecord& t : log.ticks) b.add(t.position);
  if (!std::isfinite(b.min_x)) b = Bounds{0, 0, 1, 1};

  const double margin = 15.0;
  const double w = std::max(1.0, b.max_x - b.min_x) + 2 * margin;
  const double h = std::max(1.0, b.max_y - b.min_y) + 2 * margin;
  const double scale = 900.0 / std::max(w, h);
  // SVG y grows downward; flip so north stays up.
  auto sx = [&](double x) { return (x - b.min_x + margin) * scale; };
  auto sy = [&](double y) { return (b.max_y - y + margin) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * scale)
      << "\" height=\"" << fmt(h * scale) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";

  svg << "<polyline class=\"route\" fill=\"none\" stroke=\"#888888\" stroke-width=\"3\" "
         "stroke-dasharray=\"6,4\" points=\"";
  for (const Vec2& p : route.polyline) svg << fmt(sx(p.x)) << ',' << fmt(sy(p.y)) << ' ';
  svg << "\"/>\n";

  svg << "<polyline class=\"ego\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const TickRecord& t : log.ticks)
    svg << fmt(sx(t.position.x)) << ',' << fmt(sy(t.position.y)) << ' ';
  svg << "\"/>\n";

  // First waypoint of each decision frame, transformed into the world frame.
  for (const TickRecord& t : log.ticks) {
    if (!t.decision) continue;
    const EgoPoint& wp = t.waypoints.points[0];
    const double ch = std::cos(t.heading_rad);
    const double sh = std::sin(t.heading_rad);
    const Vec2 world{t.position.x + wp.longitudinal_m * ch + wp.lateral_m * sh,
                     t.position.y + wp.longitudinal_m * sh - wp.lateral_m * ch};
    svg << "<circle class=\"waypoint\" cx=\"" << fmt(sx(world.x)) << "\" cy=\""
        << fmt(sy(world.y)) << "\" r=\"2\" fill=\"#2ca02c\"/>\n";
  }

  for (const TickRecord& t : log.ticks) {
    for (const InfractionEvent& e : t.infractions) {
      svg << "<g class=\"infraction\"><circle cx=\"" << fmt(sx(e.position.x)) << "\" cy=\""
          << fmt(sy(e.position.y)) << "\" r=\"6\" fill=\"none\" stroke=\"#d62728\" "
          << "stroke-width=\"2\"/><title>" << to_string(e.kind) << "</title></g>\n";
    }
  }

  svg << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">" << log.route_name
      << " [" << to_string(log.termination) << "]</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace middrive

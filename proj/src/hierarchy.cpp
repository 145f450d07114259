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

#include "middrive/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace middrive {

namespace {

constexpr std::array<std::string_view, kPerceptionClauseCount> kPerceptionText = {
    "Approaching a junction, prepare to follow traffic rules.",
    "A vehicle is present at the junction. Be cautious.",
    "Multiple vehicles are present at the junction. Be cautious.",
    "Watch out for the car ahead, there's a vehicle in front.",
    "Watch out for the cars ahead, there are multiple vehicles in front.",
    "A vehicle is present in the lane. Be cautious.",
    "Multiple vehicles are present in the lane. Be cautious.",
    "There is a bike ahead. Be cautious.",
    "Multiple bikes are ahead. Be cautious.",
    "There is a pedestrian ahead. Be cautious.",
    "Multiple pedestrians are ahead. Be cautious.",
    "There is a red light ahead.",
    "There is a stop sign ahead.",
};

constexpr std::array<std::string_view, kSpeedClauseCount> kSpeedText = {
    "Slow down to ensure safety.",
    "Start accelerating gradually towards the target speed.",
    "Remain stopped due to brake application.",
    "Significantly below target speed, accelerate if safe.",
    "Slightly below target speed, gently increase acceleration.",
    "Above target speed, decelerate.",
    "Maintain current speed to match the target speed.",
};

constexpr std::array<std::string_view, kMotionClauseCount> kMotionText = {
    "Steer right sharply.",
    "Make a slight right turn.",
    "Steer left sharply.",
    "Make a slight left turn.",
    "Keep the steering wheel straight.",
    "Apply brakes safely.",
};

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch);
  }
  return out;
}

// Clause category in canonical order; -1 when nothing matches.
struct ClauseRef {
  int category = -1;  // 0 perception, 1 speed, 2 motion
  int index = -1;
  std::size_t length = 0;
};

// Several clause sentences contain an internal period ("... Be cautious."),
// so parsing matches whole table sentences as prefixes rather than splitting
// on periods.
ClauseRef match_prefix(std::string_view text) {
  for (int i = 0; i < kPerceptionClauseCount; ++i) {
    const std::string_view s = kPerceptionText[static_cast<std::size_t>(i)];
    if (text.substr(0, s.size()) == s) return {0, i, s.size()};
  }
  for (int i = 0; i < kSpeedClauseCount; ++i) {
    const std::string_view s = kSpeedText[static_cast<std::size_t>(i)];
    if (text.substr(0, s.size()) == s) return {1, i, s.size()};
  }
  for (int i = 0; i < kMotionClauseCount; ++i) {
    const std::string_view s = kMotionText[static_cast<std::size_t>(i)];
    if (text.substr(0, s.size()) == s) return {2, i, s.size()};
  }
  return {};
}

bool accelerating_class(SpeedClause s) {
  return s == SpeedClause::StartAccelerating ||
         s == SpeedClause::SignificantlyBelowTarget ||
         s == SpeedClause::SlightlyBelowTarget;
}

}  // namespace

std::string_view sentence(PerceptionClause c) {
  return kPerceptionText[static_cast<std::size_t>(c)];
}
std::string_view sentence(SpeedClause c) {
  return kSpeedText[static_cast<std::size_t>(c)];
}
std::string_view sentence(MotionClause c) {
  return kMotionText[static_cast<std::size_t>(c)];
}

bool is_valid_command(const MidLevelCommand& cmd) {
  if (cmd.speed == SpeedClause::RemainStopped &&
      cmd.motion != MotionClause::SteerStraight && cmd.motion != MotionClause::Brake) {
    return false;
  }
  if (cmd.motion == MotionClause::Brake && cmd.speed && accelerating_class(*cmd.speed)) {
    return false;
  }
  return true;
}

std::string render_command(const MidLevelCommand& cmd) {
  std::string out;
  if (cmd.perception) {
    out += sentence(*cmd.perception);
  }
  if (cmd.speed) {
    if (!out.empty()) out += ' ';
    out += sentence(*cmd.speed);
  }
  if (!out.empty()) out += ' ';
  out += sentence(cmd.motion);
  return out;
}

MidLevelCommand parse_command(std::string_view text) {
  const std::string normalized = normalize_whitespace(text);
  if (normalized.empty()) throw ParseError("empty command");

  MidLevelCommand cmd;
  bool has_motion = false;
  int last_category = -1;

  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::string_view rest(normalized.data() + pos, normalized.size() - pos);
    const ClauseRef ref = match_prefix(rest);
    if (ref.category < 0) {
      const std::size_t dot = rest.find('.');
      const std::string_view sent =
          dot == std::string_view::npos ? rest : rest.substr(0, dot + 1);
      throw ParseError("unrecognized sentence: \"" + std::string(sent) + "\"");
    }
    if (ref.category <= last_category) {
      throw OrderError("clause out of canonical order: \"" +
                       std::string(rest.substr(0, ref.length)) + "\"");
    }
    switch (ref.category) {
      case 0:
        cmd.perception = static_cast<PerceptionClause>(ref.index);
        break;
      case 1:
        cmd.speed = static_cast<SpeedClause>(ref.index);
        break;
      default:
        cmd.motion = static_cast<MotionClause>(ref.index);
        has_motion = true;
        break;
    }
    last_category = ref.category;
    pos += ref.length;
    if (pos < normalized.size() && normalized[pos] == ' ') ++pos;
  }

  if (!has_motion) throw ParseError("missing motion clause");
  if (!is_valid_command(cmd)) {
    throw ParseError("inconsistent clause combination: \"" + normalized + "\"");
  }
  return cmd;
}

std::vector<MidLevelCommand> enumerate_valid_commands() {
  std::vector<MidLevelCommand> out;
  out.reserve(600);
  for (int p = -1; p < kPerceptionClauseCount; ++p) {
    for (int s = -1; s < kSpeedClauseCount; ++s) {
      for (int m = 0; m < kMotionClauseCount; ++m) {
        MidLevelCommand cmd;
        if (p >= 0) cmd.perception = static_cast<PerceptionClause>(p);
        if (s >= 0) cmd.speed = static_cast<SpeedClause>(s);
        cmd.motion = static_cast<MotionClause>(m);
        if (is_valid_command(cmd)) out.push_back(cmd);
      }
    }
  }
  return out;
}

bool waypoints_valid(const Waypoints& wp) {
  double prev = 0.0;
  for (const EgoPoint& p : wp.points) {
    const double mag = std::abs(p.longitudinal_m);
    if (mag + 1e-9 < prev) return false;
    prev = std::max(prev, mag);
  }
  return true;
}

bool control_valid(const ControlSignal& c) {
  if (!(c.throttle >= 0.0 && c.throttle <= 1.0)) return false;
  if (!(c.brake >= 0.0 && c.brake <= 1.0)) return false;
  if (!(c.steer >= -1.0 && c.steer <= 1.0)) return false;
  if (c.throttle > 0.1 && c.brake > 0.1) return false;
  return true;
}

ControlSignal clamp_control(ControlSignal c) {
  c.throttle = std::clamp(c.throttle, 0.0, 1.0);
  c.brake = std::clamp(c.brake, 0.0, 1.0);
  c.steer = std::clamp(c.steer, -1.0, 1.0);
  if (c.throttle > 0.1 && c.brake > 0.1) {
    // Brake wins on conflicting demands.
    c.throttle = 0.0;
  }
  return c;
}

}  // namespace middrive

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

#include <json.hpp>

#include "middrive/hierarchy.hpp"
#include "middrive/telemetry.hpp"
#include "middrive/world.hpp"

namespace middrive {

// Insertion-ordered JSON keeps serialized field order stable for diffing.
using Json = nlohmann::ordered_json;

Json to_json(const TelemetryFrame& f);
TelemetryFrame telemetry_from_json(const Json& j);

Json to_json(const Waypoints& wp);
Waypoints waypoints_from_json(const Json& j);

Json to_json(const ControlSignal& c);
ControlSignal control_from_json(const Json& j);

Json to_json(const InfractionEvent& e);
InfractionEvent infraction_from_json(const Json& j);

Json to_json(const Route& r);
Route route_from_json(const Json& j);

const char* to_string(TurnDirection d);
TurnDirection turn_direction_from_string(const std::string& s);

/// FNV-1a over a canonical string; used to stamp artifacts with the config
/// that produced them.
std::string fnv1a_hex(const std::string& data);

}  // namespace middrive

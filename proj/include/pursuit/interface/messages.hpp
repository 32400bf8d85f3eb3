// Copyright 2026 The dvs_pursuit Authors
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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "pursuit/class_outputs.hpp"
#include "pursuit/sim/episode.hpp"

namespace pursuit::interface {

// Telemetry broadcast to clients.
struct StateMessage
{
  double t = 0.0;  // simulated seconds
  sim::Pose predator;
  sim::Pose prey;
  std::string mode = "wander";
  ClassOutputs outputs = ClassOutputs::one_hot(9);
  double alpha = 90.0;
  double p_mag = 0.0;
  double dvs_rate_hz = 0.0;
  double aps_rate_hz = 0.0;
  std::int64_t dropped_frames = 0;
  bool paused = false;
};

StateMessage snapshot(const sim::Simulation& sim, bool paused = false);
std::string encode_state(const StateMessage& m);
StateMessage decode_state(std::string_view text);

struct PreyCommand
{
  double v = 0.0;  // clamped to [-2, 2] m/s
  double w = 0.0;  // clamped to [-pi, pi] rad/s
};
struct PauseCommand
{
  // Toggles when absent.
  std::optional<bool> paused;
};
struct ResetCommand
{
  std::uint64_t seed = 1;
};
using ClientMessage = std::variant<PreyCommand, PauseCommand, ResetCommand>;

// Throws ParseError on malformed JSON or an unknown type. Out-of-range
// velocities are clamped.
ClientMessage parse_client_message(std::string_view text);
std::string encode_client_message(const ClientMessage& m);

}  // namespace pursuit::interface

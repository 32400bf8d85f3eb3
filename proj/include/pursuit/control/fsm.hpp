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

#include <cstdint>
#include <string_view>

#include "pursuit/control/apf.hpp"
#include "pursuit/control/laser_scan.hpp"
#include "pursuit/label.hpp"
#include "pursuit/steering/position.hpp"

namespace pursuit::control {

enum class Mode { Wander, Approach, GoalAchieved, Avoid };
enum class Side { None, Left, Right };

std::string_view to_string(Mode m);

struct FsmState
{
  Mode mode = Mode::Wander;
  Side last_seen = Side::None;
  double goal_timer = 0.0;     // s spent in GoalAchieved
  double lost_timer = 0.0;     // s since the prey was last seen while approaching
  double wander_timer = 0.0;   // s since the last perturbation draw
  std::uint64_t wander_index = 0;
  double wander_w = 0.0;
  bool operator==(const FsmState&) const = default;
};

// v in m/s along the heading, w in rad/s, positive counter-clockwise.
struct VelocityCommand
{
  double v = 0.0;
  double w = 0.0;
};

struct FsmResult
{
  FsmState state;
  VelocityCommand command;
};

// One controller step. `decision` is the filtered detector decision and
// `position` the low-passed position vector (alpha in degrees, 90 ahead).
// Pure: equal inputs give equal outputs.
FsmResult fsm_step(const FsmState& state, const Label& decision, const steering::PositionVector& position,
                   const LaserScan& scan, double dt, const ApfParams& params);

// Deterministic wander perturbation in [-w_max, w_max] for draw `index`.
double wander_perturbation(std::uint64_t seed, std::uint64_t index, double w_max);

}  // namespace pursuit::control

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
#include <vector>

#include "pursuit/sim/geometry.hpp"

namespace pursuit::sim {

inline constexpr double kMaxRobotSpeed = 2.0;            // m/s
inline constexpr double kMaxRobotTurn = std::numbers::pi;  // rad/s
inline constexpr double kMaxStep = 0.05;                  // s

struct Arena
{
  double width = 9.5;
  double height = 6.7;
  std::vector<Segment> clutter;

  // Boundary walls, counter-clockwise from the origin corner.
  std::vector<Segment> walls() const;
  bool contains(Vec2 p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
};

enum class Role { Predator, Prey };
std::string_view to_string(Role r);

struct RobotState
{
  Pose pose;
  double v = 0.0;
  double w = 0.0;
  double length = 0.75;
  double width = 0.54;
  double height = 0.37;
  Role role = Role::Predator;
  // Radius of the circle used for robot-robot and clutter contact.
  double contact_radius() const { return width / 2.0 + 0.05; }
};

struct ContactCounters
{
  std::int64_t predator_wall = 0;  // steps in which the predator had to be pushed off a wall
  std::int64_t prey_wall = 0;
  std::int64_t robot_robot = 0;
  bool operator==(const ContactCounters&) const = default;
};

struct World
{
  Arena arena;
  RobotState predator;
  RobotState prey;
  double t = 0.0;  // s
  ContactCounters contacts;

  World();
  const RobotState& robot(Role r) const { return r == Role::Predator ? predator : prey; }
  RobotState& robot(Role r) { return r == Role::Predator ? predator : prey; }
};

// Integrates both robots for dt (0 < dt <= 50 ms) with the commanded v, w
// (clamped to 2 m/s and pi rad/s) and resolves collisions: footprints are
// projected back inside the walls, clutter pushes the contact circle out,
// and overlapping robots are returned to their previous positions. A robot
// pushed off an obstacle has v zeroed.
void step(World& world, double dt);

}  // namespace pursuit::sim

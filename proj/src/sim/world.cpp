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

#include "pursuit/sim/world.hpp"

#include <algorithm>
#include <string>

#include "pursuit/error.hpp"

namespace pursuit::sim {

std::vector<Segment> Arena::walls() const
{
  const Vec2 a{0.0, 0.0}, b{width, 0.0}, c{width, height}, d{0.0, height};
  return {{a, b}, {b, c}, {c, d}, {d, a}};
}

std::string_view to_string(Role r) { return r == Role::Predator ? "predator" : "prey"; }

World::World()
{
  predator.role = Role::Predator;
  prey.role = Role::Prey;
  predator.pose = {2.0, arena.height / 2.0, 0.0};
  prey.pose = {arena.width - 2.0, arena.height / 2.0, 0.0};
}

namespace {

void integrate(RobotState& r, double dt)
{
  r.v = std::clamp(r.v, -kMaxRobotSpeed, kMaxRobotSpeed);
  r.w = std::clamp(r.w, -kMaxRobotTurn, kMaxRobotTurn);
  r.pose.x += r.v * std::cos(r.pose.theta) * dt;
  r.pose.y += r.v * std::sin(r.pose.theta) * dt;
  r.pose.theta = wrap_angle(r.pose.theta + r.w * dt);
}

// Shifts the robot so that every footprint corner is inside the arena.
bool resolve_walls(RobotState& r, const Arena& arena)
{
  const auto corners = footprint(r.pose, r.length, r.width);
  double min_x = corners[0].x, max_x = corners[0].x, min_y = corners[0].y, max_y = corners[0].y;
  for (const auto& c : corners) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  double sx = 0.0, sy = 0.0;
  if (min_x < 0.0) sx = -min_x;
  if (max_x > arena.width) sx = arena.width - max_x;
  if (min_y < 0.0) sy = -min_y;
  if (max_y > arena.height) sy = arena.height - max_y;
  if (sx == 0.0 && sy == 0.0) return false;
  r.pose.x += sx;
  r.pose.y += sy;
  // Only the component of motion into the wall is removed; for a unicycle
  // that means stopping if the heading points into it.
  const double into = -(sx * std::cos(r.pose.theta) + sy * std::sin(r.pose.theta)) * r.v;
  if (into > 0.0) r.v = 0.0;
  return true;
}

bool resolve_clutter(RobotState& r, const Arena& arena)
{
  bool hit = false;
  const double rad = r.contact_radius();
  for (const auto& s : arena.clutter) {
    Vec2 c;
    const double d = point_segment_distance(r.pose.position(), s, &c);
    if (d >= rad) continue;
    const Vec2 away = d > 1e-12 ? (r.pose.position() - c) * (1.0 / d) : Vec2{-std::cos(r.pose.theta), -std::sin(r.pose.theta)};
    r.pose.x += away.x * (rad - d);
    r.pose.y += away.y * (rad - d);
    if (r.v * (std::cos(r.pose.theta) * away.x + std::sin(r.pose.theta) * away.y) < 0.0) r.v = 0.0;
    hit = true;
  }
  return hit;
}

}  // namespace

void step(World& world, double dt)
{
  if (!(dt > 0.0 && dt <= kMaxStep)) throw ConfigError("step dt must be in (0, 0.05] s, got " + std::to_string(dt));
  const Pose pred_prev = world.predator.pose;
  const Pose prey_prev = world.prey.pose;
  integrate(world.predator, dt);
  integrate(world.prey, dt);

  bool pred_hit = resolve_clutter(world.predator, world.arena);
  pred_hit = resolve_walls(world.predator, world.arena) || pred_hit;
  bool prey_hit = resolve_clutter(world.prey, world.arena);
  prey_hit = resolve_walls(world.prey, world.arena) || prey_hit;
  if (pred_hit) ++world.contacts.predator_wall;
  if (prey_hit) ++world.contacts.prey_wall;

  const double min_sep = world.predator.contact_radius() + world.prey.contact_radius();
  if ((world.predator.pose.position() - world.prey.pose.position()).norm() < min_sep) {
    world.predator.pose.x = pred_prev.x;
    world.predator.pose.y = pred_prev.y;
    world.prey.pose.x = prey_prev.x;
    world.prey.pose.y = prey_prev.y;
    world.predator.v = 0.0;
    world.prey.v = 0.0;
    ++world.contacts.robot_robot;
    // Already overlapping before the step (e.g. after a reset): separate.
    const Vec2 d = world.prey.pose.position() - world.predator.pose.position();
    const double dist = d.norm();
    if (dist < min_sep) {
      const Vec2 n = dist > 1e-12 ? d * (1.0 / dist) : Vec2{1.0, 0.0};
      const double push = (min_sep - dist) / 2.0;
      world.predator.pose.x -= n.x * push;
      world.predator.pose.y -= n.y * push;
      world.prey.pose.x += n.x * push;
      world.prey.pose.y += n.y * push;
      resolve_walls(world.predator, world.arena);
      resolve_walls(world.prey, world.arena);
    }
  }
  world.t += dt;
}

}  // namespace pursuit::sim

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
#include <cmath>
#include <numbers>
#include <optional>

namespace pursuit::sim {

struct Vec2
{
  double x = 0.0;
  double y = 0.0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

struct Segment
{
  Vec2 a;
  Vec2 b;
};

struct Pose
{
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, counter-clockwise from +x
  Vec2 position() const { return {x, y}; }
};

// Wraps to (-pi, pi].
inline double wrap_angle(double a)
{
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

// Distance t >= 0 along the unit direction `dir` from `origin` to the
// segment, if the ray hits it. `u` receives the hit parameter along the
// segment in [0, 1].
std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s, double* u = nullptr);

double point_segment_distance(Vec2 p, const Segment& s, Vec2* closest = nullptr);

// Corners of a length x width rectangle centred on the pose, counter-clockwise
// from front-left.
std::array<Vec2, 4> footprint(const Pose& pose, double length, double width);

}  // namespace pursuit::sim

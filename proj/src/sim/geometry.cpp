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

#include "pursuit/sim/geometry.hpp"

#include <algorithm>

namespace pursuit::sim {

std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s, double* u)
{
  const Vec2 e = s.b - s.a;
  const double denom = dir.cross(e);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const Vec2 d = s.a - origin;
  const double t = d.cross(e) / denom;
  const double v = d.cross(dir) / denom;
  if (t < 0.0 || v < 0.0 || v > 1.0) return std::nullopt;
  if (u) *u = v;
  return t;
}

double point_segment_distance(Vec2 p, const Segment& s, Vec2* closest)
{
  const Vec2 e = s.b - s.a;
  const double len2 = e.dot(e);
  const double t = len2 > 0.0 ? std::clamp((p - s.a).dot(e) / len2, 0.0, 1.0) : 0.0;
  const Vec2 c = s.a + e * t;
  if (closest) *closest = c;
  return (p - c).norm();
}

std::array<Vec2, 4> footprint(const Pose& pose, double length, double width)
{
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  const double hl = length / 2.0, hw = width / 2.0;
  const auto corner = [&](double fx, double fy) {
    return Vec2{pose.x + fx * c - fy * s, pose.y + fx * s + fy * c};
  };
  return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

}  // namespace pursuit::sim

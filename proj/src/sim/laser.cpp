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

#include "pursuit/sim/laser.hpp"

#include <algorithm>
#include <numbers>

#include "pursuit/error.hpp"

namespace pursuit::sim {

control::LaserScan simulate_laser(const World& world, Role robot, const LaserConfig& config)
{
  if (config.rays < 1 || !(config.max_range > 0.0)) throw ConfigError("laser needs rays and a positive range");
  const RobotState& self = world.robot(robot);
  const RobotState& other = world.robot(robot == Role::Predator ? Role::Prey : Role::Predator);

  std::vector<Segment> segments = world.arena.walls();
  segments.insert(segments.end(), world.arena.clutter.begin(), world.arena.clutter.end());
  const auto fp = footprint(other.pose, other.length, other.width);
  for (int i = 0; i < 4; ++i) segments.push_back({fp[i], fp[(i + 1) % 4]});

  control::LaserScan scan;
  scan.max_range = config.max_range;
  scan.ranges.resize(config.rays);
  scan.angles.resize(config.rays);
  const double fov = config.fov_deg * std::numbers::pi / 180.0;
  const Vec2 origin = self.pose.position();
  for (int i = 0; i < config.rays; ++i) {
    const double a = config.rays == 1 ? 0.0 : -fov / 2.0 + fov * i / (config.rays - 1);
    const Vec2 dir{std::cos(self.pose.theta + a), std::sin(self.pose.theta + a)};
    double best = config.max_range;
    for (const auto& s : segments) {
      if (auto t = ray_segment(origin, dir, s)) best = std::min(best, *t);
    }
    scan.angles[i] = a;
    scan.ranges[i] = std::clamp(best, config.min_range, config.max_range);
  }
  return scan;
}

}  // namespace pursuit::sim

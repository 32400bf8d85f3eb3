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

#include "pursuit/control/laser_scan.hpp"
#include "pursuit/sim/world.hpp"

namespace pursuit::sim {

struct LaserConfig
{
  int rays = 181;
  double fov_deg = 180.0;
  double max_range = 10.0;
  double rate_hz = 20.0;
  double min_range = 0.01;  // reported when the origin is inside an obstacle
};

// Casts rays from the robot centre against the walls, clutter and the other
// robot's footprint.
control::LaserScan simulate_laser(const World& world, Role robot, const LaserConfig& config = {});

}  // namespace pursuit::sim

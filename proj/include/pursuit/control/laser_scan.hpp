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

#include <cstddef>
#include <vector>

namespace pursuit::control {

// Planar range scan in the robot frame. Angles in radians, 0 straight
// ahead, positive to the left, strictly increasing.
struct LaserScan
{
  std::vector<double> ranges;
  std::vector<double> angles;
  double max_range = 10.0;

  // Throws Error on size mismatch, non-increasing angles or ranges outside
  // (0, max_range].
  void validate() const;
  std::size_t nearest_index() const;
  double min_range() const;
  // Minimum range over rays with |angle| <= half_width.
  double min_range_within(double half_width) const;
};

}  // namespace pursuit::control

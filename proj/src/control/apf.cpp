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

#include "pursuit/control/apf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pursuit/error.hpp"

namespace pursuit::control {

void LaserScan::validate() const
{
  if (ranges.size() != angles.size() || ranges.empty()) throw Error("laser scan needs matching, non-empty ranges and angles");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (!(ranges[i] > 0.0)) throw Error("laser range " + std::to_string(i) + " is not positive");
    if (ranges[i] > max_range) throw Error("laser range " + std::to_string(i) + " exceeds max range");
    if (i > 0 && !(angles[i] > angles[i - 1])) throw Error("laser angles must be strictly increasing");
  }
}

std::size_t LaserScan::nearest_index() const
{
  return static_cast<std::size_t>(std::min_element(ranges.begin(), ranges.end()) - ranges.begin());
}

double LaserScan::min_range() const
{
  return ranges.empty() ? max_range : *std::min_element(ranges.begin(), ranges.end());
}

double LaserScan::min_range_within(double half_width) const
{
  double m = max_range;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (std::abs(angles[i]) <= half_width) m = std::min(m, ranges[i]);
  }
  return m;
}

void ApfParams::validate() const
{
  if (!(r_hard > 0.0 && r_hard < r_soft)) throw ConfigError("need 0 < r_hard < r_soft");
  if (!(v_max > 0.0 && v_max <= 2.0)) throw ConfigError("v_max must be in (0, 2] m/s");
  if (w_spin > std::numbers::pi / 2.0 + 1e-12 || w_approach > w_spin) {
    throw ConfigError("angular speeds must not exceed pi/2 rad/s");
  }
  if (window_deg < 0.0) throw ConfigError("window must be non-negative");
}

RepulsiveField repulsive_field(const LaserScan& scan, const ApfParams& params)
{
  if (scan.ranges.size() != scan.angles.size()) throw Error("laser scan size mismatch");
  RepulsiveField f;
  f.magnitudes.resize(scan.ranges.size(), 0.0);
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double rho = scan.ranges[i];
    if (!(rho > 0.0)) throw Error("laser range " + std::to_string(i) + " is not positive");
    if (rho >= params.r_soft) continue;
    const double d = 1.0 / rho - 1.0 / params.r_soft;
    const double m = params.eta * d * d;
    f.magnitudes[i] = m;
    f.fx -= m * std::cos(scan.angles[i]);
    f.fy -= m * std::sin(scan.angles[i]);
  }
  return f;
}

double least_repulsive_direction(std::span<const double> magnitudes, std::span<const double> angles,
                                 double window_rad)
{
  if (magnitudes.empty() || magnitudes.size() != angles.size()) throw Error("least-repulsive search needs rays");
  double best_sum = std::numeric_limits<double>::infinity();
  double best_bearing = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      if (std::abs(angles[k] - angles[i]) <= window_rad + 1e-12) s += magnitudes[k];
    }
    if (s < best_sum || (s == best_sum && std::abs(angles[i]) < std::abs(best_bearing))) {
      best_sum = s;
      best_bearing = angles[i];
    }
  }
  return best_bearing;
}

double soft_scale(const LaserScan& scan, const ApfParams& params)
{
  return std::clamp((scan.min_range() - params.r_hard) / (params.r_soft - params.r_hard), 0.0, 1.0);
}

}  // namespace pursuit::control

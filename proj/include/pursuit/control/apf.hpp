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
#include <numbers>
#include <span>
#include <vector>

#include "pursuit/control/laser_scan.hpp"

namespace pursuit::control {

enum class SteerMode { Digital, Analog };

struct ApfParams
{
  double r_hard = 0.7;   // stop-and-rotate radius, m
  double r_soft = 1.5;   // slow-down radius, m
  double eta = 0.05;     // repulsive gain
  double v_max = 1.5;    // m/s
  double w_approach = std::numbers::pi / 3.0;
  double w_spin = std::numbers::pi / 2.0;
  double window_deg = 30.0;        // half-width of the least-repulsive window
  double d_goal = 1.0;             // laser range that counts as reaching the prey
  double goal_sector_deg = 13.5;   // half-width of the centre sector used for the goal check
  double goal_timeout = 5.0;       // s held in GoalAchieved before wandering again
  double lost_timeout = 4.0;       // s spinning after losing the prey
  double wander_v = 1.0;
  double wander_w_max = std::numbers::pi / 6.0;
  double wander_period = 3.0;      // s between heading perturbation draws
  double slow_distance = 2.5;      // approach speed scales by min(1, |p| / slow_distance)
  double min_speed_fraction = 0.1; // floor on the soft-zone factor for forward motion
  SteerMode steer = SteerMode::Digital;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RepulsiveField
{
  std::vector<double> magnitudes;  // per ray
  double fx = 0.0;                 // net force, robot frame
  double fy = 0.0;
};

// Khatib-style repulsion: eta * (1/rho - 1/r_soft)^2 inside the soft zone.
RepulsiveField repulsive_field(const LaserScan& scan, const ApfParams& params);

// Bearing of the ray whose +/- window sum of magnitudes is smallest; ties
// go to the smallest |bearing|.
double least_repulsive_direction(std::span<const double> magnitudes, std::span<const double> angles,
                                 double window_rad);

// clamp((rho_min - r_hard) / (r_soft - r_hard), 0, 1).
double soft_scale(const LaserScan& scan, const ApfParams& params);

}  // namespace pursuit::control

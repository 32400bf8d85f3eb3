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

#include "pursuit/control/fsm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pursuit::control {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::uint64_t splitmix(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double sign_or(double x, double fallback) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : fallback); }

// Signed bearing of the prey in the image (positive right) if the position
// vector is usable, else the centre of the decided region.
double prey_bearing(const Label& decision, const steering::PositionVector& position)
{
  if (position.valid && position.alpha > 0.0 && position.alpha < 180.0) {
    return std::clamp(steering::rescale_to_fov(position.alpha), -steering::kHalfFovDeg, steering::kHalfFovDeg);
  }
  switch (decision.region) {
    case Region::L: return -steering::kSectorDeg;
    case Region::R: return steering::kSectorDeg;
    default: return 0.0;
  }
}

}  // namespace

std::string_view to_string(Mode m)
{
  switch (m) {
    case Mode::Wander: return "wander";
    case Mode::Approach: return "approach";
    case Mode::GoalAchieved: return "goal";
    case Mode::Avoid: return "avoid";
  }
  return "?";
}

double wander_perturbation(std::uint64_t seed, std::uint64_t index, double w_max)
{
  const std::uint64_t h = splitmix(seed ^ splitmix(index + 0x632be59bd9b4e019ull));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return (2.0 * u - 1.0) * w_max;
}

FsmResult fsm_step(const FsmState& state, const Label& decision, const steering::PositionVector& position,
                   const LaserScan& scan, double dt, const ApfParams& params)
{
  FsmResult out{state, {}};
  FsmState& s = out.state;
  VelocityCommand& cmd = out.command;

  const RepulsiveField field = repulsive_field(scan, params);
  const double rho_min = scan.min_range();
  const double soft = soft_scale(scan, params);
  const double forward = std::max(soft, params.min_speed_fraction);

  const bool prey_seen = decision.region != Region::N;
  if (prey_seen) {
    const double beta = prey_bearing(decision, position);
    s.last_seen = beta < 0.0 ? Side::Left : (beta > 0.0 ? Side::Right : s.last_seen);
  }

  if (rho_min < params.r_hard) {
    const double bearing =
        least_repulsive_direction(field.magnitudes, scan.angles, params.window_deg * kDeg);
    double dir = sign_or(bearing, 0.0);
    if (dir == 0.0) dir = -sign_or(scan.angles[scan.nearest_index()], -1.0);
    s.mode = Mode::Avoid;
    cmd = {0.0, dir * params.w_spin};
    return out;
  }

  if (s.mode == Mode::GoalAchieved) {
    s.goal_timer += dt;
    if (s.goal_timer < params.goal_timeout) return out;
    s.goal_timer = 0.0;
    s.mode = Mode::Wander;
    s.wander_timer = params.wander_period;  // draw a fresh perturbation now
  }

  if (decision.region == Region::C && scan.min_range_within(params.goal_sector_deg * kDeg) < params.d_goal) {
    s.mode = Mode::GoalAchieved;
    s.goal_timer = 0.0;
    s.lost_timer = 0.0;
    return out;
  }

  if (prey_seen) {
    s.mode = Mode::Approach;
    s.lost_timer = 0.0;
    const double beta = prey_bearing(decision, position);
    double w = 0.0;
    if (params.steer == SteerMode::Analog) {
      w = -std::clamp(beta / steering::kHalfFovDeg, -1.0, 1.0) * params.w_approach;
    } else if (decision.region == Region::L) {
      w = params.w_approach;
    } else if (decision.region == Region::R) {
      w = -params.w_approach;
    }
    const double dist_scale = position.valid ? std::min(1.0, position.p_mag / params.slow_distance) : 1.0;
    cmd = {params.v_max * forward * dist_scale, w * std::max(soft, params.min_speed_fraction)};
    return out;
  }

  if (s.mode == Mode::Approach && s.last_seen != Side::None && s.lost_timer < params.lost_timeout) {
    s.lost_timer += dt;
    cmd = {0.0, (s.last_seen == Side::Left ? 1.0 : -1.0) * params.w_spin};
    return out;
  }

  if (s.mode != Mode::Wander) {
    s.mode = Mode::Wander;
    s.lost_timer = 0.0;
    s.wander_timer = params.wander_period;
  }
  s.wander_timer += dt;
  if (s.wander_timer >= params.wander_period) {
    s.wander_timer = 0.0;
    s.wander_w = wander_perturbation(params.seed, s.wander_index++, params.wander_w_max);
  }
  // Inside the soft zone, turn along the net repulsive force so the robot
  // does not creep along walls.
  const double away = field.fx == 0.0 && field.fy == 0.0 ? 0.0 : std::atan2(field.fy, field.fx);
  const double w_open = std::clamp(1.5 * away, -params.w_spin, params.w_spin);
  cmd = {params.wander_v * forward, soft * s.wander_w + (1.0 - soft) * w_open};
  return out;
}

}  // namespace pursuit::control

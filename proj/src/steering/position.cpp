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

#include "pursuit/steering/position.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace pursuit::steering {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;
// Degrees of alpha per degree of in-image angle is 1 / 0.45.
constexpr double kFovScale = kHalfFovDeg / 90.0;
}  // namespace

void SteeringParams::validate() const
{
  if (!(r > 0.0) || !(kappa > 0.0) || !(tau > 0.0) || !(dq_alpha > 0.0) || !(dq_p > 0.0)) {
    throw ConfigError("steering parameters r, kappa, tau and quantization steps must be positive");
  }
}

std::pair<double, double> projections(const ClassOutputs& o, double r)
{
  const double dx = o.region_sum(Region::R) / 3.0 - o.region_sum(Region::L) / 3.0;
  const double dy = o.region_sum(Region::C) / 3.0 - o.none() / r;
  return {dx, dy};
}

double size_numerator(const ClassOutputs& o)
{
  const double s = o.size_sum(Size::S) / 3.0;
  const double m = o.size_sum(Size::M) / 3.0;
  const double xl = o.size_sum(Size::XL) / 3.0;
  return (s + m) / 2.0 + xl / 3.0;
}

PositionVector analog_position(const ClassOutputs& o, const SteeringParams& params)
{
  PositionVector pv;
  const auto [dx, dy] = projections(o, params.r);
  pv.dx = dx;
  pv.dy = dy;
  if (dx == 0.0 && dy == 0.0) return pv;  // direction undefined

  double alpha = std::atan2(dy, dx) * kRadToDeg;
  if (alpha < 0.0) alpha += 360.0;
  if (alpha >= 360.0) alpha -= 360.0;
  pv.alpha = alpha;
  pv.valid = o.argmax() != 9;
  if (pv.valid) pv.p_mag = size_numerator(o) / params.kappa;
  return pv;
}

double rescale_to_fov(double alpha)
{
  if (!(alpha > 0.0 && alpha < 180.0)) {
    throw OutOfFovError("alpha " + std::to_string(alpha) + " is outside the frontal half-plane");
  }
  return (90.0 - alpha) * kFovScale;
}

double fov_to_alpha(double beta) { return 90.0 - beta / kFovScale; }

Region region_of_bearing(double beta)
{
  if (std::abs(beta) > kHalfFovDeg) return Region::N;
  if (beta < -kSectorDeg / 2.0) return Region::L;
  if (beta >= kSectorDeg / 2.0) return Region::R;
  return Region::C;
}

ClassOutputs encode_position(double beta, std::span<const double, 3> size_weights)
{
  beta = std::clamp(beta, -kHalfFovDeg, kHalfFovDeg);
  // Work on the right half and mirror. theta is the angle from the lateral
  // axis; pC / (p_near - p_far) = tan(theta) reproduces alpha exactly, and a
  // constant far-side share k*c puts the near/centre crossover at the
  // sector boundary (theta = 60 deg).
  const double theta = (90.0 - std::abs(beta) / kFovScale) * kDegToRad;
  const double k = std::sin(60.0 * kDegToRad) - std::cos(60.0 * kDegToRad);
  const double c = 1.0 / (2.0 * k + std::cos(theta) + std::sin(theta));
  const double far = k * c;
  const double near = far + c * std::cos(theta);
  const double centre = c * std::sin(theta);
  const double p_left = beta < 0.0 ? near : far;
  const double p_right = beta < 0.0 ? far : near;

  double total = size_weights[0] + size_weights[1] + size_weights[2];
  std::array<double, 3> q{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (total > 0.0) {
    for (int i = 0; i < 3; ++i) q[i] = size_weights[i] / total;
  }
  ClassOutputs o;
  for (int s = 0; s < 3; ++s) {
    o.p[0 + s] = p_left * q[s];
    o.p[3 + s] = centre * q[s];
    o.p[6 + s] = p_right * q[s];
  }
  return o;
}

ClassOutputs encode_position(double beta, Size size)
{
  std::array<double, 3> w{0.0, 0.0, 0.0};
  w[static_cast<int>(size)] = 1.0;
  return encode_position(beta, std::span<const double, 3>(w));
}

double calibrate_kappa(std::span<const std::pair<double, double>> numerator_distance)
{
  double uu = 0.0, ud = 0.0;
  for (const auto& [u, d] : numerator_distance) {
    uu += u * u;
    ud += u * d;
  }
  if (!(uu > 0.0) || !(ud > 0.0)) throw Error("kappa calibration needs positive size and distance samples");
  return uu / ud;
}

}  // namespace pursuit::steering

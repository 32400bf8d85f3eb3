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

#include <span>
#include <utility>

#include "pursuit/class_outputs.hpp"
#include "pursuit/error.hpp"
#include "pursuit/label.hpp"

namespace pursuit::steering {

inline constexpr double kFovDeg = 81.0;
inline constexpr double kHalfFovDeg = kFovDeg / 2.0;
inline constexpr double kSectorDeg = kFovDeg / 3.0;

struct SteeringParams
{
  double r = 3.0;              // divisor applied to o(N) in the forward component
  double kappa = 1.0 / 15.0;   // distance scale; pure C:M decodes to 2.5 m
  double tau = 0.1;            // low-pass time constant, seconds
  double dq_alpha = 20.0;      // command quantization, degrees
  double dq_p = 1.0;           // command quantization, metres

  void validate() const;
};

// Prey position relative to the predator. alpha is in degrees, 0 = right,
// 90 = straight ahead, 180 = left, 270 = behind.
struct PositionVector
{
  double alpha = 0.0;
  double p_mag = 0.0;
  bool valid = false;
  double dx = 0.0;
  double dy = 0.0;
};

// Lateral (right minus left) and forward (centre minus scaled N) components.
std::pair<double, double> projections(const ClassOutputs& o, double r);

// Unscaled distance term (s(S) + s(M))/2 + s(XL)/3; |p| is this over kappa.
double size_numerator(const ClassOutputs& o);

PositionVector analog_position(const ClassOutputs& o, const SteeringParams& params = {});

class OutOfFovError : public Error
{
public:
  using Error::Error;
};

// Maps a frontal alpha in (0,180) to a signed in-image angle in
// (-40.5, 40.5), positive to the right.
double rescale_to_fov(double alpha);
double fov_to_alpha(double beta);

// Region of a signed in-image bearing (positive right), by image third.
// Boundaries belong to the third on their right, as with pixel columns.
Region region_of_bearing(double beta);

// Ideal outputs for a visible prey at in-image bearing beta (degrees,
// positive right) whose analog decode returns beta exactly and whose
// digitized region is the image third containing beta. Size mass follows
// `size_weights` (S, M, XL; normalised internally).
ClassOutputs encode_position(double beta, std::span<const double, 3> size_weights);
ClassOutputs encode_position(double beta, Size size);

// Least-squares 1/kappa from (size_numerator, true distance) pairs,
// i.e. the kappa minimising sum (d - u / kappa)^2.
double calibrate_kappa(std::span<const std::pair<double, double>> numerator_distance);

}  // namespace pursuit::steering

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

#include <optional>

#include "pursuit/class_outputs.hpp"
#include "pursuit/label.hpp"
#include "pursuit/steering/position.hpp"

namespace pursuit::steering {

// Region = argmax of {sum L, sum C, sum R, o(N)}; size = argmax of the size
// sums (absent for N). Exact ties resolve to the earlier entry in L<C<R<N
// and S<M<XL.
Label digitize(const ClassOutputs& o);

bool region_transition_allowed(Region from, Region to);
bool size_transition_allowed(Size from, Size to);

// Rejects physically impossible jumps between consecutive decisions
// (L<->R, C<->N, S<->XL). Region and size are filtered independently; a
// rejected field keeps its previous value. The first decision is accepted.
class ConstraintFilter
{
public:
  Label apply(const Label& proposed);
  const std::optional<Label>& last() const { return last_; }
  void reset() { last_.reset(); }

private:
  std::optional<Label> last_;
};

// First-order IIR: y += dt / (tau + dt) * (x - y).
double lowpass_update(double prev, double next, double dt, double tau);
// Same filter on the circle (degrees in [0,360)), along the shortest arc.
double lowpass_angle(double prev, double next, double dt, double tau);

struct QuantizedCommand
{
  double alpha = 0.0;  // lower edge of the alpha bin
  double p = 0.0;      // lower edge of the distance bin
  bool operator==(const QuantizedCommand&) const = default;
};

// Emits a command only when alpha or |p| lands in a different bin than the
// last emission. Bins are anchored at 0.
class CommandQuantizer
{
public:
  explicit CommandQuantizer(double dq_alpha = 20.0, double dq_p = 1.0) : dq_alpha_(dq_alpha), dq_p_(dq_p) {}

  std::optional<QuantizedCommand> update(double alpha, double p_mag);
  const std::optional<QuantizedCommand>& last() const { return last_; }

private:
  double dq_alpha_;
  double dq_p_;
  std::optional<QuantizedCommand> last_;
  long alpha_bin_ = 0;
  long p_bin_ = 0;
};

// Everything derived from one network output.
struct SteeringUpdate
{
  PositionVector raw;
  Label raw_decision;
  Label decision;  // after the constraint filter
  double alpha = 0.0;  // low-passed
  double p_mag = 0.0;  // low-passed
  bool position_valid = false;
  std::optional<QuantizedCommand> command;
};

// Per-pipeline decision state: constraint filter, low-pass filters and the
// command quantizer.
class SteeringState
{
public:
  explicit SteeringState(SteeringParams params = {});

  // `t` is the output timestamp in seconds.
  SteeringUpdate update(const ClassOutputs& o, double t);

  const SteeringParams& params() const { return params_; }
  const std::optional<SteeringUpdate>& latest() const { return latest_; }

private:
  SteeringParams params_;
  ConstraintFilter constraint_;
  CommandQuantizer quantizer_;
  bool have_position_ = false;
  double alpha_ = 0.0;
  double p_mag_ = 0.0;
  double last_t_ = 0.0;
  std::optional<SteeringUpdate> latest_;
};

}  // namespace pursuit::steering

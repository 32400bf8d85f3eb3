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

#include "pursuit/steering/decision.hpp"

#include <cmath>

namespace pursuit::steering {

Label digitize(const ClassOutputs& o)
{
  Region region = Region::L;
  double best = o.region_sum(Region::L);
  for (Region r : {Region::C, Region::R, Region::N}) {
    if (o.region_sum(r) > best) {
      best = o.region_sum(r);
      region = r;
    }
  }
  if (region == Region::N) return {Region::N, std::nullopt};
  Size size = Size::S;
  double best_size = o.size_sum(Size::S);
  for (Size s : {Size::M, Size::XL}) {
    if (o.size_sum(s) > best_size) {
      best_size = o.size_sum(s);
      size = s;
    }
  }
  return {region, size};
}

bool region_transition_allowed(Region from, Region to)
{
  auto pair = [&](Region a, Region b) { return (from == a && to == b) || (from == b && to == a); };
  return !pair(Region::L, Region::R) && !pair(Region::C, Region::N);
}

bool size_transition_allowed(Size from, Size to)
{
  return !((from == Size::S && to == Size::XL) || (from == Size::XL && to == Size::S));
}

Label ConstraintFilter::apply(const Label& proposed)
{
  if (!last_) {
    last_ = proposed;
    return proposed;
  }
  const Label& prev = *last_;
  Label out;
  out.region = region_transition_allowed(prev.region, proposed.region) ? proposed.region : prev.region;
  if (out.region != Region::N) {
    const auto& cand = proposed.size;
    if (!cand) {
      out.size = prev.size;
    } else if (!prev.size) {
      out.size = cand;
    } else {
      out.size = size_transition_allowed(*prev.size, *cand) ? cand : prev.size;
    }
  }
  last_ = out;
  return out;
}

double lowpass_update(double prev, double next, double dt, double tau)
{
  if (std::isinf(dt)) return next;
  return prev + dt / (tau + dt) * (next - prev);
}

double lowpass_angle(double prev, double next, double dt, double tau)
{
  double diff = std::fmod(next - prev, 360.0);
  if (diff > 180.0) diff -= 360.0;
  if (diff <= -180.0) diff += 360.0;
  double out = std::isinf(dt) ? prev + diff : prev + dt / (tau + dt) * diff;
  out = std::fmod(out, 360.0);
  if (out < 0.0) out += 360.0;
  return out;
}

std::optional<QuantizedCommand> CommandQuantizer::update(double alpha, double p_mag)
{
  const auto a_bin = static_cast<long>(std::floor(alpha / dq_alpha_));
  const auto p_bin = static_cast<long>(std::floor(p_mag / dq_p_));
  if (last_ && a_bin == alpha_bin_ && p_bin == p_bin_) return std::nullopt;
  alpha_bin_ = a_bin;
  p_bin_ = p_bin;
  last_ = QuantizedCommand{static_cast<double>(a_bin) * dq_alpha_, static_cast<double>(p_bin) * dq_p_};
  return last_;
}

SteeringState::SteeringState(SteeringParams params)
  : params_(params), quantizer_(params.dq_alpha, params.dq_p)
{
  params_.validate();
}

SteeringUpdate SteeringState::update(const ClassOutputs& o, double t)
{
  SteeringUpdate u;
  u.raw = analog_position(o, params_);
  u.raw_decision = digitize(o);
  u.decision = constraint_.apply(u.raw_decision);

  if (u.raw.valid) {
    if (!have_position_) {
      alpha_ = u.raw.alpha;
      p_mag_ = u.raw.p_mag;
      have_position_ = true;
    } else {
      const double dt = std::max(0.0, t - last_t_);
      alpha_ = lowpass_angle(alpha_, u.raw.alpha, dt, params_.tau);
      p_mag_ = lowpass_update(p_mag_, u.raw.p_mag, dt, params_.tau);
    }
    u.command = quantizer_.update(alpha_, p_mag_);
  }
  last_t_ = t;
  u.alpha = alpha_;
  u.p_mag = p_mag_;
  u.position_valid = have_position_ && u.raw.valid;
  latest_ = u;
  return u;
}

}  // namespace pursuit::steering

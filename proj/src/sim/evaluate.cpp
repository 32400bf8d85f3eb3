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

#include "pursuit/sim/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "pursuit/steering/decision.hpp"

namespace pursuit::sim {

double Evaluation::mean_angle_error() const
{
  return angle_samples ? angle_error_sum / static_cast<double>(angle_samples)
                       : std::numeric_limits<double>::quiet_NaN();
}

Evaluation evaluate(const net::Network& net, std::span<const Sample> samples, const steering::SteeringParams& params)
{
  Evaluation e;
  for (const auto& s : samples) {
    const ClassOutputs o = net.forward(s.frame);
    const int truth = s.label.class_index();
    const int pred = o.argmax();
    ++e.total;
    ++e.confusion[truth][pred];
    if (pred == truth) ++e.correct;
    if (steering::digitize(o).region == s.label.region) ++e.region_correct;
    if (!s.visible) continue;
    ++e.visible;
    const auto pos = steering::analog_position(o, params);
    if (!pos.valid || !(pos.alpha > 0.0 && pos.alpha < 180.0)) continue;
    ++e.angle_samples;
    e.angle_error_sum += std::abs(steering::rescale_to_fov(pos.alpha) - s.bearing);
  }
  return e;
}

std::string Evaluation::report() const
{
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "accuracy %.4f (%lld/%lld)  region accuracy %.4f  mean angle error %.2f deg (%.1f%% of FOV) over "
                "%lld/%lld visible",
                accuracy(), static_cast<long long>(correct), static_cast<long long>(total), region_accuracy(),
                mean_angle_error(), 100.0 * mean_angle_error() / steering::kFovDeg,
                static_cast<long long>(angle_samples), static_cast<long long>(visible));
  std::string out = buf;
  out += "\nconfusion (rows truth, columns predicted; L:S .. R:XL, N)\n";
  for (const auto& row : confusion) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%7lld", static_cast<long long>(row[j]));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace pursuit::sim

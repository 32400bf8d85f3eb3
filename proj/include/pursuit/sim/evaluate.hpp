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

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "pursuit/net/network.hpp"
#include "pursuit/sim/dataset.hpp"
#include "pursuit/steering/position.hpp"

namespace pursuit::sim {

struct Evaluation
{
  std::int64_t total = 0;
  std::int64_t correct = 0;
  std::int64_t region_correct = 0;
  std::int64_t visible = 0;
  // Visible frames whose decoded position is valid and frontal.
  std::int64_t angle_samples = 0;
  double angle_error_sum = 0.0;  // field-of-view degrees
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> confusion{};  // [truth][predicted]

  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
  double region_accuracy() const
  {
    return total ? static_cast<double>(region_correct) / static_cast<double>(total) : 0.0;
  }
  double mean_angle_error() const;
  std::string report() const;
};

Evaluation evaluate(const net::Network& net, std::span<const Sample> samples,
                    const steering::SteeringParams& params = {});

}  // namespace pursuit::sim

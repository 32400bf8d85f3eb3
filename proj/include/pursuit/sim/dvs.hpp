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
#include <random>
#include <vector>

#include "pursuit/events/event.hpp"
#include "pursuit/events/frame.hpp"

namespace pursuit::sim {

struct DvsConfig
{
  double contrast_threshold = 0.15;  // log-intensity units
  double log_epsilon = 0.01;         // log(I + eps)
  double noise_rate = 0.0;           // events/s over the whole array
  void validate() const;
};

// Idealized per-pixel log-intensity threshold integrator.
class DvsSynthesizer
{
public:
  explicit DvsSynthesizer(DvsConfig config = {}, std::uint64_t seed = 1);

  // Sets the per-pixel reference levels without emitting events.
  void reset(const events::GrayImage& image);
  bool initialized() const { return !reference_.empty(); }

  // Events for the change from the last image to `image` over (t0, t1].
  // Each pixel emits floor(|dlog| / C) events of the sign of the change,
  // spread evenly with the last at t1, and moves its reference by that many
  // thresholds. Poisson noise at noise_rate + extra_noise_rate is added.
  // Output is sorted by time. The first call only initializes.
  std::vector<events::Event> synthesize(const events::GrayImage& image, std::int64_t t0, std::int64_t t1,
                                        double extra_noise_rate = 0.0);

  const DvsConfig& config() const { return config_; }

private:
  DvsConfig config_;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> reference_;
  std::vector<double> log_;
  std::mt19937_64 rng_;
};

// Noise events only: Poisson count with uniform pixel, time and polarity.
void append_noise(std::vector<events::Event>& out, double rate, std::int64_t t0, std::int64_t t1, int width,
                  int height, std::mt19937_64& rng);

}  // namespace pursuit::sim

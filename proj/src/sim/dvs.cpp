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

#include "pursuit/sim/dvs.hpp"

#include <algorithm>
#include <cmath>

#include "pursuit/error.hpp"
#include "fast_log.hpp"

namespace pursuit::sim {

void DvsConfig::validate() const
{
  if (!(contrast_threshold > 0.0)) throw ConfigError("contrast threshold must be positive");
  if (!(log_epsilon > 0.0)) throw ConfigError("log epsilon must be positive");
  if (!(noise_rate >= 0.0)) throw ConfigError("noise rate must be non-negative");
}

DvsSynthesizer::DvsSynthesizer(DvsConfig config, std::uint64_t seed) : config_(config), rng_(seed)
{
  config_.validate();
}

void DvsSynthesizer::reset(const events::GrayImage& image)
{
  width_ = image.width;
  height_ = image.height;
  reference_.resize(image.data.size());
  log_image(image.data.data(), reference_.data(), image.data.size(), config_.log_epsilon);
}

void append_noise(std::vector<events::Event>& out, double rate, std::int64_t t0, std::int64_t t1, int width,
                  int height, std::mt19937_64& rng)
{
  if (rate <= 0.0 || t1 <= t0) return;
  const double mean = rate * static_cast<double>(t1 - t0) * 1e-6;
  const auto n = std::poisson_distribution<std::int64_t>(mean)(rng);
  std::uniform_int_distribution<std::int64_t> t_dist(t0 + 1, t1);
  std::uniform_int_distribution<int> x_dist(0, width - 1), y_dist(0, height - 1), p_dist(0, 1);
  for (std::int64_t i = 0; i < n; ++i) {
    events::Event e;
    e.t = t_dist(rng);
    e.x = static_cast<std::uint16_t>(x_dist(rng));
    e.y = static_cast<std::uint16_t>(y_dist(rng));
    e.polarity = p_dist(rng) ? events::Polarity::On : events::Polarity::Off;
    out.push_back(e);
  }
}

std::vector<events::Event> DvsSynthesizer::synthesize(const events::GrayImage& image, std::int64_t t0,
                                                      std::int64_t t1, double extra_noise_rate)
{
  std::vector<events::Event> out;
  if (!initialized()) {
    reset(image);
    return out;
  }
  if (image.width != width_ || image.height != height_) throw ShapeError("DVS input resolution changed");
  if (t1 <= t0) throw Error("DVS interval must have t1 > t0");

  const double c = config_.contrast_threshold;
  const std::int64_t span = t1 - t0;
  const std::size_t n = reference_.size();
  log_.resize(n);
  log_image(image.data.data(), log_.data(), n, config_.log_epsilon);
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = log_[i] - reference_[i];
    if (std::abs(delta) < c) continue;
    const auto k = static_cast<std::int64_t>(std::floor(std::abs(delta) / c));
    const double sign = delta > 0.0 ? 1.0 : -1.0;
    reference_[i] += sign * static_cast<double>(k) * c;
    const auto pol = delta > 0.0 ? events::Polarity::On : events::Polarity::Off;
    const auto x = static_cast<std::uint16_t>(i % width_), y = static_cast<std::uint16_t>(i / width_);
    for (std::int64_t j = 0; j < k; ++j) out.push_back({t0 + (j + 1) * span / k, x, y, pol});
  }
  append_noise(out, config_.noise_rate + extra_noise_rate, t0, t1, width_, height_, rng_);
  std::stable_sort(out.begin(), out.end(), [](const events::Event& a, const events::Event& b) { return a.t < b.t; });
  return out;
}

}  // namespace pursuit::sim

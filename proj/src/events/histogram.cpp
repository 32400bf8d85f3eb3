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

#include "pursuit/events/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "pursuit/error.hpp"

namespace pursuit::events {

HistogramAccumulator::HistogramAccumulator(HistogramConfig config)
  : config_(config)
{
  validate_frame_width(config_.width);
  if (config_.events_per_frame < 1) throw ConfigError("events_per_frame must be >= 1");
  if (config_.clip < 1) throw ConfigError("histogram clip must be >= 1");
  col_map_.resize(kSensorWidth);
  row_map_.resize(kSensorHeight);
  for (int x = 0; x < kSensorWidth; ++x) col_map_[x] = x * config_.width / kSensorWidth;
  for (int y = 0; y < kSensorHeight; ++y) row_map_[y] = y * config_.width / kSensorHeight;
  reset();
}

void HistogramAccumulator::reset()
{
  counts_.assign(static_cast<std::size_t>(config_.width) * config_.width, 0);
  n_collected_ = 0;
}

std::optional<CountGrid> HistogramAccumulator::accumulate(const Event& e)
{
  const auto idx = static_cast<std::size_t>(row_map_[e.y]) * config_.width + col_map_[e.x];
  int& c = counts_[idx];
  c = std::clamp(c + (e.polarity == Polarity::On ? 1 : -1), -config_.clip, config_.clip);
  if (++n_collected_ < config_.events_per_frame) return std::nullopt;

  CountGrid grid{config_.width, std::move(counts_), e.t};
  reset();
  return grid;
}

double histogram_sigma(const CountGrid& grid)
{
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (int c : grid.counts) {
    if (c != 0) {
      sum_sq += static_cast<double>(c) * c;
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(n));
}

double normalize_count(int count, double sigma)
{
  if (count == 0 || sigma <= 0.0) return 0.5;
  return std::clamp(0.5 + count / (6.0 * sigma), 0.0, 1.0);
}

Frame normalize_histogram(const CountGrid& grid)
{
  Frame f(grid.width, FrameKind::Dvs, grid.t, 0.5);
  if (grid.counts.size() != f.pixels.size()) throw ShapeError("count grid is not width x width");
  const double sigma = histogram_sigma(grid);
  for (std::size_t i = 0; i < f.pixels.size(); ++i) {
    f.pixels[i] = normalize_count(grid.counts[i], sigma);
  }
  return f;
}

}  // namespace pursuit::events

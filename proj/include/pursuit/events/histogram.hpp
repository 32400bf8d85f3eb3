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
#include <optional>
#include <vector>

#include "pursuit/events/event.hpp"
#include "pursuit/events/frame.hpp"

namespace pursuit::events {

// Signed per-pixel event counts of one histogram, already mapped to the
// network resolution.
struct CountGrid
{
  int width = 0;
  std::vector<int> counts;
  std::int64_t t = 0;  // timestamp of the event that completed the grid

  int at(int x, int y) const { return counts[static_cast<std::size_t>(y) * width + x]; }
};

struct HistogramConfig
{
  int width = 36;
  int events_per_frame = 5000;
  int clip = 16;
};

// Integrates a fixed number of events into a W x W signed count grid.
// Coordinates are mapped by truncated division (240 -> W, 180 -> W).
class HistogramAccumulator
{
public:
  explicit HistogramAccumulator(HistogramConfig config = {});

  // Returns the completed grid when the n-th event arrives.
  std::optional<CountGrid> accumulate(const Event& e);

  int collected() const { return n_collected_; }
  const HistogramConfig& config() const { return config_; }
  void reset();

private:
  HistogramConfig config_;
  std::vector<int> counts_;
  int n_collected_ = 0;
  std::vector<int> col_map_;
  std::vector<int> row_map_;
};

// Scale used for normalization: RMS of the nonzero counts about zero.
double histogram_sigma(const CountGrid& grid);

// pixel = clamp(0.5 + count / (6 sigma), 0, 1); zero counts stay at 0.5.
double normalize_count(int count, double sigma);

Frame normalize_histogram(const CountGrid& grid);

}  // namespace pursuit::events

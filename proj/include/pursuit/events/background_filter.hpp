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

namespace pursuit::events {

struct FilterConfig
{
  std::int64_t dt_max_us = 10'000;
  int radius = 1;
};

/*
 * Spatiotemporal correlation (background activity) filter.
 *
 * An event passes if any pixel in the (2r+1)^2 neighbourhood, the pixel
 * itself included, saw an event no more than dt_max earlier. Every event,
 * passed or not, refreshes its pixel's timestamp, so two coincident noise
 * events can support each other. The first events of a stream have no
 * history and are dropped.
 */
class BackgroundActivityFilter
{
public:
  explicit BackgroundActivityFilter(FilterConfig config = {});

  std::optional<Event> step(const Event& e);

  const FilterConfig& config() const { return config_; }
  void reset();

  std::int64_t last_timestamp(int x, int y) const { return last_ts_[y * kSensorWidth + x]; }

private:
  FilterConfig config_;
  std::vector<std::int64_t> last_ts_;
};

}  // namespace pursuit::events

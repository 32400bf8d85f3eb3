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

#include "pursuit/events/background_filter.hpp"

#include <algorithm>
#include <limits>

#include "pursuit/error.hpp"

namespace pursuit::events {

namespace {
// Far enough in the past that t - kNever never underflows.
constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min() / 4;
}  // namespace

BackgroundActivityFilter::BackgroundActivityFilter(FilterConfig config)
  : config_(config)
{
  if (config_.dt_max_us <= 0) throw ConfigError("filter dt_max must be positive");
  if (config_.radius < 1) throw ConfigError("filter radius must be at least 1");
  reset();
}

void BackgroundActivityFilter::reset()
{
  last_ts_.assign(static_cast<std::size_t>(kSensorWidth) * kSensorHeight, kNever);
}

std::optional<Event> BackgroundActivityFilter::step(const Event& e)
{
  const int r = config_.radius;
  const int x0 = std::max(0, e.x - r), x1 = std::min(kSensorWidth - 1, e.x + r);
  const int y0 = std::max(0, e.y - r), y1 = std::min(kSensorHeight - 1, e.y + r);

  bool supported = false;
  for (int y = y0; y <= y1 && !supported; ++y) {
    const std::int64_t* row = &last_ts_[static_cast<std::size_t>(y) * kSensorWidth];
    for (int x = x0; x <= x1; ++x) {
      if (e.t - row[x] <= config_.dt_max_us) {
        supported = true;
        break;
      }
    }
  }
  last_ts_[static_cast<std::size_t>(e.y) * kSensorWidth + e.x] = e.t;
  if (supported) return e;
  return std::nullopt;
}

}  // namespace pursuit::events

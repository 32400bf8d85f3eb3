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
#include <string>
#include <vector>

#include "pursuit/net/network.hpp"

namespace pursuit::interface {

struct LatencyStats
{
  int runs = 0;
  double min_ms = 0.0;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

LatencyStats summarize_latencies(std::vector<double> ms);

// Forward passes on one preloaded random frame; I/O is excluded.
LatencyStats forward_latency(const net::Network& net, int runs = 1000, std::uint64_t seed = 1);

struct FilterThroughput
{
  std::int64_t events = 0;
  std::int64_t passed = 0;
  double seconds = 0.0;
  double events_per_second() const { return seconds > 0.0 ? static_cast<double>(events) / seconds : 0.0; }
};

// Background filter over a synthetic uniform stream of `events` events at
// `rate` events/s.
FilterThroughput filter_throughput(std::int64_t events = 2'000'000, double rate = 1e6, std::uint64_t seed = 1);

std::string format_latency(const LatencyStats& s);

}  // namespace pursuit::interface

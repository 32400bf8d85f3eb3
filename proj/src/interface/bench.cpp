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

#include "pursuit/interface/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "pursuit/error.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/sim/dvs.hpp"

namespace pursuit::interface {

namespace {

double percentile(const std::vector<double>& sorted, double q)
{
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

LatencyStats summarize_latencies(std::vector<double> ms)
{
  if (ms.empty()) throw Error("no latency samples");
  std::sort(ms.begin(), ms.end());
  LatencyStats s;
  s.runs = static_cast<int>(ms.size());
  s.min_ms = ms.front();
  s.max_ms = ms.back();
  s.median_ms = percentile(ms, 0.5);
  s.p90_ms = percentile(ms, 0.9);
  s.p99_ms = percentile(ms, 0.99);
  double sum = 0.0;
  for (double v : ms) sum += v;
  s.mean_ms = sum / static_cast<double>(ms.size());
  return s;
}

LatencyStats forward_latency(const net::Network& net, int runs, std::uint64_t seed)
{
  if (runs < 1) throw ConfigError("need at least one run");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  events::Frame frame(net.architecture().input_width, events::FrameKind::Dvs);
  for (auto& p : frame.pixels) p = u(rng);
  net.forward(frame);  // warm-up: allocates the workspace
  std::vector<double> ms;
  ms.reserve(runs);
  volatile double sink = 0.0;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = net.forward(frame);
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + out[0];
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return summarize_latencies(std::move(ms));
}

FilterThroughput filter_throughput(std::int64_t events, double rate, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<events::Event> stream;
  const auto duration = static_cast<std::int64_t>(static_cast<double>(events) / rate * 1e6);
  sim::append_noise(stream, rate, 0, std::max<std::int64_t>(duration, 1), events::kSensorWidth,
                    events::kSensorHeight, rng);
  std::stable_sort(stream.begin(), stream.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  events::BackgroundActivityFilter filter;
  FilterThroughput r;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& e : stream) r.passed += filter.step(e).has_value();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.events = static_cast<std::int64_t>(stream.size());
  return r;
}

std::string format_latency(const LatencyStats& s)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, "runs %d  min %.3f  median %.3f  mean %.3f  p90 %.3f  p99 %.3f  max %.3f ms", s.runs,
                s.min_ms, s.median_ms, s.mean_ms, s.p90_ms, s.p99_ms, s.max_ms);
  return buf;
}

}  // namespace pursuit::interface

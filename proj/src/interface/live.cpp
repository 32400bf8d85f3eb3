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

#include "pursuit/interface/live.hpp"

#include <chrono>
#include <limits>

namespace pursuit::interface {

sim::EpisodeConfig live_config(sim::EpisodeConfig base)
{
  base.duration = std::numeric_limits<double>::max();
  base.stop_on_capture = false;
  base.prey_policy = sim::PreyPolicy::External;
  base.prey_script.clear();
  return base;
}

LiveSession::LiveSession(sim::EpisodeConfig config)
    : config_(std::move(config)), sim_(std::make_unique<sim::Simulation>(config_))
{
  snapshot_ = interface::snapshot(*sim_, paused_);
}

LiveSession::~LiveSession() { stop(); }

void LiveSession::submit(const ClientMessage& m)
{
  std::lock_guard lock(mutex_);
  queue_.push_back(m);
}

void LiveSession::disconnect() { submit(PreyCommand{0.0, 0.0}); }

void LiveSession::tick_locked()
{
  std::optional<PreyCommand> prey;
  for (const auto& m : queue_) {
    if (const auto* p = std::get_if<PreyCommand>(&m)) {
      prey = *p;  // last writer wins
    } else if (const auto* p = std::get_if<PauseCommand>(&m)) {
      paused_ = p->paused ? *p->paused : !paused_;
    } else {
      config_.seed = std::get<ResetCommand>(m).seed;
      sim_ = std::make_unique<sim::Simulation>(config_);
      prey.reset();
    }
  }
  queue_.clear();
  if (prey) sim_->set_prey_command(prey->v, prey->w);
  if (!paused_) sim_->tick();
  snapshot_ = interface::snapshot(*sim_, paused_);
}

void LiveSession::advance(std::int64_t ticks)
{
  std::lock_guard lock(mutex_);
  for (std::int64_t i = 0; i < ticks; ++i) tick_locked();
}

StateMessage LiveSession::snapshot() const
{
  std::lock_guard lock(mutex_);
  return snapshot_;
}

sim::EpisodeTrace LiveSession::trace() const
{
  std::lock_guard lock(mutex_);
  return sim_->trace();
}

bool LiveSession::paused() const
{
  std::lock_guard lock(mutex_);
  return paused_;
}

void LiveSession::start(double realtime_factor)
{
  if (running_.exchange(true)) return;
  thread_ = std::thread([this, realtime_factor] { run(realtime_factor); });
}

void LiveSession::stop()
{
  running_ = false;
  if (thread_.joinable()) thread_.join();
}

void LiveSession::run(double realtime_factor)
{
  using clock = std::chrono::steady_clock;
  constexpr int kBatch = 10;
  constexpr auto kMaxLag = std::chrono::milliseconds(100);
  auto anchor_wall = clock::now();
  std::int64_t anchor_sim = 0;
  {
    std::lock_guard lock(mutex_);
    anchor_sim = sim_->now_us();
  }
  while (running_) {
    std::int64_t now_sim = 0;
    bool paused = false;
    {
      std::lock_guard lock(mutex_);
      for (int i = 0; i < kBatch; ++i) tick_locked();
      now_sim = sim_->now_us();
      paused = paused_;
    }
    if (paused || now_sim < anchor_sim) {  // paused or reset: re-anchor
      anchor_wall = clock::now();
      anchor_sim = now_sim;
      if (paused) std::this_thread::sleep_for(std::chrono::milliseconds(10));
      continue;
    }
    const auto target =
        anchor_wall + std::chrono::microseconds(static_cast<std::int64_t>((now_sim - anchor_sim) / realtime_factor));
    const auto wall = clock::now();
    if (wall < target) {
      std::this_thread::sleep_until(target);
    } else if (wall - target > kMaxLag) {
      anchor_wall = wall;
      anchor_sim = now_sim;
    }
  }
}

}  // namespace pursuit::interface

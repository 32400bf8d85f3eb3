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

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "pursuit/interface/messages.hpp"
#include "pursuit/sim/episode.hpp"

namespace pursuit::interface {

// Episode defaults for a live session: open-ended, prey driven by clients.
sim::EpisodeConfig live_config(sim::EpisodeConfig base);

// A simulation shared between the network side and its own stepping
// thread. All world changes go through the command queue, which is drained
// once per tick.
class LiveSession
{
public:
  explicit LiveSession(sim::EpisodeConfig config);
  ~LiveSession();

  LiveSession(const LiveSession&) = delete;
  LiveSession& operator=(const LiveSession&) = delete;

  void submit(const ClientMessage& m);
  // Dead-man rule: a dropped client stops the prey.
  void disconnect();

  // Steps `ticks` ticks on the calling thread (no pacing).
  void advance(std::int64_t ticks);

  // Paces the simulation against the wall clock on a background thread.
  // When the host cannot keep up, simulated time runs slower.
  void start(double realtime_factor = 1.0);
  void stop();

  StateMessage snapshot() const;
  sim::EpisodeTrace trace() const;
  bool paused() const;

private:
  void tick_locked();
  void run(double realtime_factor);

  sim::EpisodeConfig config_;
  mutable std::mutex mutex_;
  std::unique_ptr<sim::Simulation> sim_;
  std::vector<ClientMessage> queue_;
  bool paused_ = false;
  StateMessage snapshot_;
  std::atomic<bool> running_{false};
  std::thread thread_;
};

}  // namespace pursuit::interface

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
#include <string>

#include "pursuit/interface/live.hpp"

namespace pursuit::interface {

struct ServerConfig
{
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double broadcast_hz = 20.0;
};

// Websocket (RFC 6455) front end for a LiveSession: text frames carrying
// JSON, state broadcast at a fixed rate, client commands forwarded to the
// session queue. Runs its own single-threaded I/O loop.
class StateServer
{
public:
  StateServer(LiveSession& session, ServerConfig config = {});
  ~StateServer();

  StateServer(const StateServer&) = delete;
  StateServer& operator=(const StateServer&) = delete;

  // Binds and starts serving on a background thread.
  void start();
  void stop();

  unsigned short port() const;
  std::int64_t malformed_messages() const;
  std::int64_t clients() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pursuit::interface

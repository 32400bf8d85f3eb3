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

#include "pursuit/interface/server.hpp"

#include <chrono>
#include <deque>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "pursuit/error.hpp"

namespace pursuit::interface {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr std::size_t kMaxQueued = 8;  // outgoing messages per slow client

class Connection;

struct Shared
{
  LiveSession& session;
  std::set<std::shared_ptr<Connection>> connections;
  std::atomic<std::int64_t> malformed{0};
  std::atomic<std::int64_t> clients{0};
};

class Connection : public std::enable_shared_from_this<Connection>
{
public:
  Connection(tcp::socket socket, Shared& shared) : ws_(std::move(socket)), shared_(shared) {}

  void start()
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->close();
      self->open_ = true;
      self->shared_.connections.insert(self);
      ++self->shared_.clients;
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> text)
  {
    if (!open_) return;
    if (outbox_.size() >= kMaxQueued) outbox_.pop_back();  // keep the newest state
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write();
  }

  void shutdown()
  {
    if (!open_) return;
    beast::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    ws_.next_layer().close(ec);
  }

private:
  void read()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->shared_.session.submit(parse_client_message(text));
      } catch (const ParseError&) {
        ++self->shared_.malformed;
      }
      self->read();
    });
  }

  void write()
  {
    ws_.text(true);
    ws_.async_write(asio::buffer(*outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write();
    });
  }

  void close()
  {
    if (!open_) return;
    open_ = false;
    outbox_.clear();
    --shared_.clients;
    shared_.session.disconnect();
    shared_.connections.erase(shared_from_this());
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  Shared& shared_;
  bool open_ = false;
};

}  // namespace

struct StateServer::Impl
{
  Impl(LiveSession& session, ServerConfig cfg) : config(std::move(cfg)), shared{session, {}}, acceptor(io), timer(io) {}

  void accept()
  {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), shared)->start();
      accept();
    });
  }

  void broadcast()
  {
    next_broadcast += period;
    timer.expires_at(next_broadcast);
    timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      const auto text = std::make_shared<const std::string>(encode_state(shared.session.snapshot()));
      // Copy: a failed send may remove the connection from the set.
      const auto targets = shared.connections;
      for (const auto& c : targets) c->send(text);
      broadcast();
    });
  }

  ServerConfig config;
  asio::io_context io;
  Shared shared;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  std::chrono::steady_clock::duration period{};
  std::chrono::steady_clock::time_point next_broadcast;
  std::thread thread;
  std::atomic<bool> stopped{false};
};

StateServer::StateServer(LiveSession& session, ServerConfig config)
    : impl_(std::make_unique<Impl>(session, std::move(config)))
{
  if (!(impl_->config.broadcast_hz > 0.0)) throw ConfigError("broadcast rate must be positive");
}

StateServer::~StateServer() { stop(); }

void StateServer::start()
{
  Impl& m = *impl_;
  const tcp::endpoint endpoint(asio::ip::make_address(m.config.address), m.config.port);
  try {
    m.acceptor.open(endpoint.protocol());
    m.acceptor.set_option(asio::socket_base::reuse_address(true));
    m.acceptor.bind(endpoint);
    m.acceptor.listen();
  } catch (const boost::system::system_error& e) {
    throw Error("cannot listen on " + m.config.address + ":" + std::to_string(m.config.port) + ": " + e.what());
  }
  m.period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / m.config.broadcast_hz));
  m.next_broadcast = std::chrono::steady_clock::now();
  m.accept();
  m.broadcast();
  m.thread = std::thread([&m] { m.io.run(); });
}

void StateServer::stop()
{
  Impl& m = *impl_;
  if (m.stopped.exchange(true)) return;
  asio::post(m.io, [&m] {
    beast::error_code ec;
    m.acceptor.close(ec);
    m.timer.cancel();
    const auto all = m.shared.connections;
    for (const auto& c : all) c->shutdown();
  });
  if (m.thread.joinable()) {
    // Give pending handlers a moment to observe the closed sockets.
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    m.io.stop();
    m.thread.join();
  }
}

unsigned short StateServer::port() const
{
  beast::error_code ec;
  const auto ep = impl_->acceptor.local_endpoint(ec);
  return ec ? impl_->config.port : ep.port();
}

std::int64_t StateServer::malformed_messages() const { return impl_->shared.malformed; }
std::int64_t StateServer::clients() const { return impl_->shared.clients; }

}  // namespace pursuit::interface

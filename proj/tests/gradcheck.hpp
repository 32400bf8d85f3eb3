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

// Central finite-difference reference for the network's backward pass.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "pursuit/events/frame.hpp"
#include "pursuit/net/layers.hpp"
#include "pursuit/net/network.hpp"
#include "pursuit/net/train.hpp"

namespace gradcheck {

inline constexpr double kEps = 1e-3;
// Below this magnitude both gradients count as zero; the central difference
// cannot resolve them against rounding in the loss.
inline constexpr double kFloor = 1e-7;

struct Result
{
  double max_rel = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates whose perturbation crosses a ReLU or pooling switch
};

inline double rel_error(double a, double n)
{
  const double d = std::max({std::abs(a), std::abs(n), kFloor});
  return std::abs(a - n) / d;
}

inline void merge(Result& into, const Result& r)
{
  into.max_rel = std::max(into.max_rel, r.max_rel);
  into.checked += r.checked;
  into.skipped += r.skipped;
}

// Compares analytic[i] against the central difference of loss() around
// values[i]. pattern() fingerprints the piecewise-linear region; a
// coordinate is skipped when the fingerprint changes inside +/- eps.
template <class Loss, class Pattern>
Result check(std::span<double> values, std::span<const double> analytic, Loss loss, Pattern pattern)
{
  Result r;
  const auto base = pattern();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double keep = values[i];
    values[i] = keep + kEps;
    const double up = loss();
    const bool same_up = pattern() == base;
    values[i] = keep - kEps;
    const double down = loss();
    const bool same_down = pattern() == base;
    values[i] = keep;
    if (!same_up || !same_down) {
      ++r.skipped;
      continue;
    }
    r.max_rel = std::max(r.max_rel, rel_error(analytic[i], (up - down) / (2.0 * kEps)));
    ++r.checked;
  }
  return r;
}

inline void fill(std::span<double> v, std::mt19937_64& rng, double scale)
{
  std::normal_distribution<double> n(0.0, scale);
  for (auto& x : v) x = n(rng);
}

// Whole network, softmax cross-entropy, all parameters and the input.
inline Result network_instance(std::uint64_t seed)
{
  using namespace pursuit;
  std::mt19937_64 rng(seed);
  net::Architecture arch{12, 2, 3, 8, 10, true};
  net::Network model(arch, seed);
  for (auto& l : model.layers()) fill(l.biases, rng, 0.1);

  events::Frame frame(12, events::FrameKind::Dvs);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& p : frame.pixels) p = u(rng);
  const int label = static_cast<int>(rng() % 10);
  const net::Example ex{&frame, label, nullptr};

  net::TrainConfig cfg;
  net::Trainer trainer(model, cfg);
  auto grads = model.make_gradients();
  trainer.loss_and_gradients(std::span(&ex, 1), grads);

  net::Workspace ws;
  auto forward_loss = [&] {
    model.forward(net::frame_to_tensor(frame), ws);
    return -std::log(ws.acts.back().data[label]);
  };
  auto pattern = [&] {
    model.forward(net::frame_to_tensor(frame), ws);
    std::vector<std::int64_t> fp;
    for (std::size_t i = 0; i < model.layers().size(); ++i) {
      const auto kind = model.layers()[i].kind;
      if (kind == net::LayerKind::Relu) {
        for (double v : ws.acts[i].data) fp.push_back(v > 0.0);
      } else if (kind == net::LayerKind::MaxPool) {
        fp.insert(fp.end(), ws.pool_argmax[i].begin(), ws.pool_argmax[i].end());
      }
    }
    return fp;
  };

  Result total;
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    auto& l = model.layers()[i];
    if (!l.has_parameters()) continue;
    merge(total, check(std::span<double>(l.weights), grads.weights[i], forward_loss, pattern));
    merge(total, check(std::span<double>(l.biases), grads.biases[i], forward_loss, pattern));
  }

  // Input gradient through the full stack, including the softmax Jacobian.
  model.forward(net::frame_to_tensor(frame), ws);
  net::Tensor seed_grad = net::Tensor::vector(10);
  seed_grad.data[label] = -1.0 / ws.acts.back().data[label];
  model.backward(ws, static_cast<int>(model.layers().size()) - 1, seed_grad, nullptr, false, true);
  const std::vector<double> input_grad = ws.grad_a.data;
  merge(total, check(std::span<double>(frame.pixels), input_grad, forward_loss, pattern));
  return total;
}

// Single layers under the linear loss sum(g * out) with a random g.
inline Result conv_instance(std::uint64_t seed)
{
  using namespace pursuit::net;
  std::mt19937_64 rng(seed);
  Tensor in(2, 7, 7);
  fill(in.data, rng, 1.0);
  std::vector<double> k(3 * 2 * 25), b(3);
  fill(k, rng, 0.3);
  fill(b, rng, 0.3);
  Tensor g(3, 7, 7);
  fill(g.data, rng, 1.0);
  auto loss = [&] {
    const Tensor out = conv2d_forward(in, k, b);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.data[i] * g.data[i];
    return s;
  };
  Tensor gin;
  std::vector<double> gk(k.size()), gb(b.size());
  conv2d_backward(in, k, g, &gin, gk, gb);
  auto none = [] { return 0; };
  Result r;
  merge(r, check(std::span<double>(in.data), gin.data, loss, none));
  merge(r, check(std::span<double>(k), gk, loss, none));
  merge(r, check(std::span<double>(b), gb, loss, none));
  return r;
}

inline Result dense_instance(std::uint64_t seed)
{
  using namespace pursuit::net;
  std::mt19937_64 rng(seed);
  Tensor in = Tensor::vector(13);
  fill(in.data, rng, 1.0);
  std::vector<double> w(7 * 13), b(7);
  fill(w, rng, 0.3);
  fill(b, rng, 0.3);
  Tensor g = Tensor::vector(7), out;
  fill(g.data, rng, 1.0);
  auto loss = [&] {
    dense_forward(in, w, b, out);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.data[i] * g.data[i];
    return s;
  };
  Tensor gin;
  std::vector<double> gw(w.size()), gb(b.size());
  dense_backward(in, w, g, &gin, gw, gb);
  auto none = [] { return 0; };
  Result r;
  merge(r, check(std::span<double>(in.data), gin.data, loss, none));
  merge(r, check(std::span<double>(w), gw, loss, none));
  merge(r, check(std::span<double>(b), gb, loss, none));
  return r;
}

inline Result pool_relu_instance(std::uint64_t seed)
{
  using namespace pursuit::net;
  std::mt19937_64 rng(seed);
  Tensor in(2, 6, 6);
  fill(in.data, rng, 1.0);
  Tensor g(2, 3, 3);
  fill(g.data, rng, 1.0);
  Tensor pooled, act;
  std::vector<int> argmax;
  auto loss = [&] {
    relu_forward(in, act);
    maxpool_forward(act, pooled, argmax);
    double s = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) s += pooled.data[i] * g.data[i];
    return s;
  };
  auto pattern = [&] {
    loss();
    std::vector<int> fp = argmax;
    for (double v : in.data) fp.push_back(v > 0.0);
    return fp;
  };
  loss();
  Tensor g_act(2, 6, 6), g_in;
  maxpool_backward(g, argmax, g_act);
  relu_backward(in, g_act, g_in);
  return check(std::span<double>(in.data), g_in.data, loss, pattern);
}

}  // namespace gradcheck

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

#include "pursuit/net/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pursuit/error.hpp"
#include "pursuit/net/layers.hpp"

namespace pursuit::net {

std::string_view to_string(LayerKind kind)
{
  switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::Relu: return "relu";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::Dense: return "fc";
    case LayerKind::Softmax: return "softmax";
  }
  return "?";
}

void Gradients::zero()
{
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

Tensor frame_to_tensor(const events::Frame& frame)
{
  Tensor t(1, frame.width, frame.width);
  t.data = frame.pixels;
  return t;
}

namespace {

Layer conv(std::string name, int in, int out)
{
  Layer l{LayerKind::Conv, std::move(name), in, out, {}, {}};
  l.weights.assign(static_cast<std::size_t>(in) * out * kKernelSize * kKernelSize, 0.0);
  l.biases.assign(out, 0.0);
  return l;
}

Layer dense(std::string name, int in, int out)
{
  Layer l{LayerKind::Dense, std::move(name), in, out, {}, {}};
  l.weights.assign(static_cast<std::size_t>(in) * out, 0.0);
  l.biases.assign(out, 0.0);
  return l;
}

Layer plain(LayerKind kind, std::string name) { return Layer{kind, std::move(name), 0, 0, {}, {}}; }

std::vector<Layer> build(const Architecture& a)
{
  events::validate_frame_width(a.input_width);
  if (a.conv1_maps < 1 || a.conv2_maps < 1 || a.fc_units < 1 || a.classes < 2 || a.pooled_width() < 1) {
    throw ConfigError("invalid network architecture");
  }
  std::vector<Layer> ls;
  ls.push_back(conv("conv1", 1, a.conv1_maps));
  if (a.relu) ls.push_back(plain(LayerKind::Relu, "relu1"));
  ls.push_back(plain(LayerKind::MaxPool, "pool1"));
  ls.push_back(conv("conv2", a.conv1_maps, a.conv2_maps));
  if (a.relu) ls.push_back(plain(LayerKind::Relu, "relu2"));
  ls.push_back(plain(LayerKind::MaxPool, "pool2"));
  ls.push_back(dense("fc1", a.flat_size(), a.fc_units));
  if (a.relu) ls.push_back(plain(LayerKind::Relu, "relu3"));
  ls.push_back(dense("fc2", a.fc_units, a.classes));
  ls.push_back(plain(LayerKind::Softmax, "softmax"));
  return ls;
}

}  // namespace

Network::Network(const Architecture& arch, std::uint64_t seed, double init_scale)
  : arch_(arch), layers_(build(arch))
{
  std::mt19937_64 rng(seed);
  for (auto& l : layers_) {
    if (!l.has_parameters()) continue;
    const int taps = l.kind == LayerKind::Conv ? kKernelSize * kKernelSize : 1;
    const double fan_in = static_cast<double>(l.in) * taps;
    const double fan_out = static_cast<double>(l.out) * taps;
    const double bound = init_scale * std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& w : l.weights) w = dist(rng);
  }
}

Network Network::zeros(const Architecture& arch)
{
  return Network(arch, 0, 0.0);
}

int Network::layer_index(std::string_view name) const
{
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].name == name) return static_cast<int>(i);
  }
  throw Error("network has no layer named '" + std::string(name) + "'");
}

void Network::forward(const Tensor& input, Workspace& ws) const
{
  if (input.channels != 1 || input.height != arch_.input_width || input.width != arch_.input_width) {
    throw ShapeError("network expects a 1x" + std::to_string(arch_.input_width) + "x" +
                     std::to_string(arch_.input_width) + " input");
  }
  ws.acts.resize(layers_.size() + 1);
  ws.pool_argmax.resize(layers_.size());
  ws.acts[0] = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    const Tensor& in = ws.acts[i];
    Tensor& out = ws.acts[i + 1];
    switch (l.kind) {
      case LayerKind::Conv: conv2d_forward(in, l.weights, l.biases, out); break;
      case LayerKind::Relu: relu_forward(in, out); break;
      case LayerKind::MaxPool: maxpool_forward(in, out, ws.pool_argmax[i]); break;
      case LayerKind::Dense: dense_forward(in, l.weights, l.biases, out); break;
      case LayerKind::Softmax:
        out.reshape(static_cast<int>(in.size()), 1, 1);
        softmax(in.data, out.data);
        break;
    }
  }
}

ClassOutputs Network::forward(const events::Frame& frame) const
{
  if (frame.width != arch_.input_width) {
    throw ShapeError("frame width " + std::to_string(frame.width) + " does not match network input " +
                     std::to_string(arch_.input_width));
  }
  if (arch_.classes != kNumClasses) throw ShapeError("network does not have 10 outputs");
  thread_local Workspace ws;
  forward(frame_to_tensor(frame), ws);
  ClassOutputs o;
  std::copy(ws.acts.back().data.begin(), ws.acts.back().data.end(), o.p.begin());
  return o;
}

void Network::backward(Workspace& ws, int from, const Tensor& grad, Gradients* grads, bool guided,
                       bool want_input_grad) const
{
  ws.grad_a = grad;
  for (int i = from; i >= 0; --i) {
    const Layer& l = layers_[i];
    const Tensor& in = ws.acts[i];
    const bool need_input = i > 0 || want_input_grad;
    Tensor& gin = ws.grad_b;
    switch (l.kind) {
      case LayerKind::Conv:
        if (grads) {
          conv2d_backward(in, l.weights, ws.grad_a, need_input ? &gin : nullptr, grads->weights[i],
                          grads->biases[i]);
        } else {
          std::vector<double> gw(l.weights.size()), gb(l.biases.size());
          conv2d_backward(in, l.weights, ws.grad_a, need_input ? &gin : nullptr, gw, gb);
        }
        break;
      case LayerKind::Dense:
        if (grads) {
          dense_backward(in, l.weights, ws.grad_a, need_input ? &gin : nullptr, grads->weights[i],
                         grads->biases[i]);
        } else {
          std::vector<double> gw(l.weights.size()), gb(l.biases.size());
          dense_backward(in, l.weights, ws.grad_a, need_input ? &gin : nullptr, gw, gb);
        }
        break;
      case LayerKind::Relu: relu_backward(in, ws.grad_a, gin, guided); break;
      case LayerKind::MaxPool:
        gin.reshape(in.channels, in.height, in.width);
        maxpool_backward(ws.grad_a, ws.pool_argmax[i], gin);
        break;
      case LayerKind::Softmax: {
        // Jacobian-vector product of softmax; training bypasses this layer.
        const auto& p = ws.acts[i + 1].data;
        double dot = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) dot += p[k] * ws.grad_a.data[k];
        gin.reshape(in.channels, in.height, in.width);
        for (std::size_t k = 0; k < p.size(); ++k) gin.data[k] = p[k] * (ws.grad_a.data[k] - dot);
        break;
      }
    }
    if (!need_input) break;
    std::swap(ws.grad_a, ws.grad_b);
  }
}

Gradients Network::make_gradients() const
{
  Gradients g;
  g.weights.resize(layers_.size());
  g.biases.resize(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    g.weights[i].assign(layers_[i].weights.size(), 0.0);
    g.biases[i].assign(layers_[i].biases.size(), 0.0);
  }
  return g;
}

std::size_t Network::conv_weight_count() const
{
  std::size_t n = 0;
  for (const auto& l : layers_) {
    if (l.kind == LayerKind::Conv) n += l.weights.size();
  }
  return n;
}

std::size_t Network::layer_weight_count(std::string_view name) const
{
  return layers_[layer_index(name)].weights.size();
}

std::size_t Network::parameter_count() const
{
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

std::vector<Tensor> Network::shape_chain() const
{
  Workspace ws;
  forward(Tensor(1, arch_.input_width, arch_.input_width), ws);
  std::vector<Tensor> shapes;
  for (const auto& a : ws.acts) shapes.emplace_back(a.channels, a.height, a.width);
  for (auto& s : shapes) s.data.clear();
  return shapes;
}

}  // namespace pursuit::net

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
#include <string_view>
#include <vector>

#include "pursuit/class_outputs.hpp"
#include "pursuit/events/frame.hpp"
#include "pursuit/net/tensor.hpp"

namespace pursuit::net {

enum class LayerKind { Conv, Relu, MaxPool, Dense, Softmax };

std::string_view to_string(LayerKind kind);

// One stage of the stack. Conv: in/out are channel counts, weights are
// (out, in, 5, 5). Dense: in/out are unit counts, weights are (out, in).
struct Layer
{
  LayerKind kind = LayerKind::Relu;
  std::string name;
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  bool has_parameters() const { return kind == LayerKind::Conv || kind == LayerKind::Dense; }
};

// nC5-R-2S-mC5-R-2S-qF-R-kF (+softmax). `relu = false` drops the
// activations, which gives a linear net used to cross-check saliency.
struct Architecture
{
  int input_width = 36;
  int conv1_maps = 10;
  int conv2_maps = 20;
  int fc_units = 100;
  int classes = 10;
  bool relu = true;

  int pooled_width() const { return input_width / 2 / 2; }
  int flat_size() const { return conv2_maps * pooled_width() * pooled_width(); }
  bool operator==(const Architecture&) const = default;
};

// Cached activations of one forward pass. acts[0] is the input and
// acts[i + 1] the output of layer i.
struct Workspace
{
  std::vector<Tensor> acts;
  std::vector<std::vector<int>> pool_argmax;
  Tensor grad_a;
  Tensor grad_b;
};

struct Gradients
{
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  void zero();
};

Tensor frame_to_tensor(const events::Frame& frame);

class Network
{
public:
  Network() = default;
  // Glorot-uniform weights scaled by init_scale, zero biases.
  explicit Network(const Architecture& arch, std::uint64_t seed = 1, double init_scale = 1.0);

  static Network zeros(const Architecture& arch);

  const Architecture& architecture() const { return arch_; }
  int input_width() const { return arch_.input_width; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  // Index of the named layer; throws if absent.
  int layer_index(std::string_view name) const;

  // Throws ShapeError when the frame width differs from input_width().
  ClassOutputs forward(const events::Frame& frame) const;
  void forward(const Tensor& input, Workspace& ws) const;

  // Propagates `grad` (gradient w.r.t. the output of layer `from`) down to
  // the input. Parameter gradients are accumulated into `grads` if given.
  // The result is left in ws.grad_a when `want_input_grad` is set.
  void backward(Workspace& ws, int from, const Tensor& grad, Gradients* grads, bool guided,
                bool want_input_grad) const;

  Gradients make_gradients() const;

  std::size_t conv_weight_count() const;
  std::size_t layer_weight_count(std::string_view name) const;
  std::size_t parameter_count() const;

  // Output shape (c, h, w) after every layer for the configured input.
  std::vector<Tensor> shape_chain() const;

private:
  Architecture arch_;
  std::vector<Layer> layers_;
};

}  // namespace pursuit::net

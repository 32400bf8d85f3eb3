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

#include <span>
#include <vector>

#include "pursuit/net/tensor.hpp"

namespace pursuit::net {

inline constexpr int kKernelSize = 5;
inline constexpr int kPadding = 2;

// Same-padded 5x5 convolution. `kernels` is (out, in, 5, 5) row-major and
// `biases` has one entry per output map. Throws ShapeError when the kernel
// depth does not match the input channels.
Tensor conv2d_forward(const Tensor& input, std::span<const double> kernels, std::span<const double> biases);
void conv2d_forward(const Tensor& input, std::span<const double> kernels, std::span<const double> biases,
                    Tensor& output);

// Accumulates into grad_kernels / grad_biases. grad_input may be null when
// the input gradient is not needed (first layer).
void conv2d_backward(const Tensor& input, std::span<const double> kernels, const Tensor& grad_output,
                     Tensor* grad_input, std::span<double> grad_kernels, std::span<double> grad_biases);

// 2x2 window, stride 2. Odd sizes are floored. argmax holds, per output
// element, the flat index of the winning input element.
struct PoolResult
{
  Tensor output;
  std::vector<int> argmax;
};
PoolResult maxpool_forward(const Tensor& input);
void maxpool_forward(const Tensor& input, Tensor& output, std::vector<int>& argmax);
void maxpool_backward(const Tensor& grad_output, const std::vector<int>& argmax, Tensor& grad_input);

void relu_forward(const Tensor& input, Tensor& output);
// Guided mode also zeroes negative incoming gradients.
void relu_backward(const Tensor& input, const Tensor& grad_output, Tensor& grad_input, bool guided = false);

// Fully connected. `weights` is (out, in) row-major.
void dense_forward(const Tensor& input, std::span<const double> weights, std::span<const double> biases,
                   Tensor& output);
void dense_backward(const Tensor& input, std::span<const double> weights, const Tensor& grad_output,
                    Tensor* grad_input, std::span<double> grad_weights, std::span<double> grad_biases);

void softmax(std::span<const double> logits, std::span<double> probs);

}  // namespace pursuit::net

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

#include "pursuit/net/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <cblas.h>

#include "pursuit/error.hpp"

namespace pursuit::net {

namespace {

constexpr int kTaps = kKernelSize * kKernelSize;

struct ConvDims
{
  int in_channels;
  int out_channels;
};

ConvDims conv_dims(const Tensor& input, std::span<const double> kernels, std::span<const double> biases)
{
  const auto out = static_cast<int>(biases.size());
  if (out == 0 || kernels.size() % (static_cast<std::size_t>(out) * kTaps) != 0) {
    throw ShapeError("conv kernels are not (out, in, 5, 5)");
  }
  const auto in = static_cast<int>(kernels.size() / (static_cast<std::size_t>(out) * kTaps));
  if (in != input.channels) {
    throw ShapeError("conv kernel depth " + std::to_string(in) + " does not match input channels " +
                     std::to_string(input.channels));
  }
  return {in, out};
}

// Output rows/cols whose tap (offset d) stays inside [0, n).
inline int lo(int d) { return std::max(0, -d); }
inline int hi(int d, int n) { return std::min(n, n - d); }

// Rows are (channel, ky, kx) taps, columns output pixels; out-of-image
// taps read zero.
void im2col(const Tensor& input, std::vector<double>& col)
{
  const int h = input.height, w = input.width, n = h * w;
  col.assign(static_cast<std::size_t>(input.channels) * kTaps * n, 0.0);
  for (int c = 0; c < input.channels; ++c) {
    const double* src = input.plane(c);
    for (int ky = 0; ky < kKernelSize; ++ky) {
      const int dy = ky - kPadding;
      for (int kx = 0; kx < kKernelSize; ++kx) {
        const int dx = kx - kPadding;
        double* row = col.data() + static_cast<std::size_t>((c * kKernelSize + ky) * kKernelSize + kx) * n;
        const int x0 = lo(dx), x1 = hi(dx, w);
        for (int oy = lo(dy); oy < hi(dy, h); ++oy) {
          std::copy(src + (oy + dy) * w + dx + x0, src + (oy + dy) * w + dx + x1, row + oy * w + x0);
        }
      }
    }
  }
}

void col2im(const std::vector<double>& col, Tensor& out)
{
  const int h = out.height, w = out.width, n = h * w;
  std::fill(out.data.begin(), out.data.end(), 0.0);
  for (int c = 0; c < out.channels; ++c) {
    double* dst = out.plane(c);
    for (int ky = 0; ky < kKernelSize; ++ky) {
      const int dy = ky - kPadding;
      for (int kx = 0; kx < kKernelSize; ++kx) {
        const int dx = kx - kPadding;
        const double* row = col.data() + static_cast<std::size_t>((c * kKernelSize + ky) * kKernelSize + kx) * n;
        const int x0 = lo(dx), x1 = hi(dx, w);
        for (int oy = lo(dy); oy < hi(dy, h); ++oy) {
          double* d = dst + (oy + dy) * w + dx;
          const double* r = row + oy * w;
#pragma omp simd
          for (int ox = x0; ox < x1; ++ox) d[ox] += r[ox];
        }
      }
    }
  }
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, std::span<const double> kernels, std::span<const double> biases)
{
  Tensor out;
  conv2d_forward(input, kernels, biases, out);
  return out;
}

void conv2d_forward(const Tensor& input, std::span<const double> kernels, std::span<const double> biases,
                    Tensor& output)
{
  const auto [in_ch, out_ch] = conv_dims(input, kernels, biases);
  const int h = input.height, w = input.width;
  const int n = h * w;
  output.reshape(out_ch, h, w);
  thread_local std::vector<double> col;
  im2col(input, col);
  for (int m = 0; m < out_ch; ++m) std::fill(output.plane(m), output.plane(m) + n, biases[m]);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, out_ch, n, in_ch * kTaps, 1.0, kernels.data(),
              in_ch * kTaps, col.data(), n, 1.0, output.data.data(), n);
}

void conv2d_backward(const Tensor& input, std::span<const double> kernels, const Tensor& grad_output,
                     Tensor* grad_input, std::span<double> grad_kernels, std::span<double> grad_biases)
{
  const int out_ch = static_cast<int>(grad_biases.size());
  const int in_ch = input.channels;
  const int h = input.height, w = input.width;
  const int n = h * w;
  const int k = in_ch * kTaps;
  if (grad_output.channels != out_ch || grad_output.height != h || grad_output.width != w ||
      kernels.size() != static_cast<std::size_t>(out_ch) * k || grad_kernels.size() != kernels.size()) {
    throw ShapeError("conv backward shape mismatch");
  }

  for (int m = 0; m < out_ch; ++m) {
    const double* go = grad_output.plane(m);
    double bsum = 0.0;
#pragma omp simd reduction(+ : bsum)
    for (int i = 0; i < n; ++i) bsum += go[i];
    grad_biases[m] += bsum;
  }

  thread_local std::vector<double> col;
  im2col(input, col);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, out_ch, k, n, 1.0, grad_output.data.data(), n, col.data(),
              n, 1.0, grad_kernels.data(), k);

  if (grad_input) {
    col.resize(static_cast<std::size_t>(k) * n);
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, k, n, out_ch, 1.0, kernels.data(), k,
                grad_output.data.data(), n, 0.0, col.data(), n);
    grad_input->reshape(in_ch, h, w);
    col2im(col, *grad_input);
  }
}

PoolResult maxpool_forward(const Tensor& input)
{
  PoolResult r;
  maxpool_forward(input, r.output, r.argmax);
  return r;
}

void maxpool_forward(const Tensor& input, Tensor& output, std::vector<int>& argmax)
{
  const int oh = input.height / 2, ow = input.width / 2;
  output.reshape(input.channels, oh, ow);
  argmax.assign(output.size(), 0);
  std::size_t o = 0;
  for (int c = 0; c < input.channels; ++c) {
    const int base = static_cast<int>(c * input.plane_size());
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x, ++o) {
        int best = base + (2 * y) * input.width + 2 * x;
        const int candidates[3] = {best + 1, best + input.width, best + input.width + 1};
        for (int idx : candidates) {
          if (input.data[idx] > input.data[best]) best = idx;
        }
        output.data[o] = input.data[best];
        argmax[o] = best;
      }
    }
  }
}

void maxpool_backward(const Tensor& grad_output, const std::vector<int>& argmax, Tensor& grad_input)
{
  std::fill(grad_input.data.begin(), grad_input.data.end(), 0.0);
  for (std::size_t o = 0; o < grad_output.size(); ++o) {
    grad_input.data[argmax[o]] += grad_output.data[o];
  }
}

void relu_forward(const Tensor& input, Tensor& output)
{
  output.reshape(input.channels, input.height, input.width);
  for (std::size_t i = 0; i < input.size(); ++i) output.data[i] = std::max(0.0, input.data[i]);
}

void relu_backward(const Tensor& input, const Tensor& grad_output, Tensor& grad_input, bool guided)
{
  grad_input.reshape(input.channels, input.height, input.width);
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double g = grad_output.data[i];
    const bool pass = input.data[i] > 0.0 && (!guided || g > 0.0);
    grad_input.data[i] = pass ? g : 0.0;
  }
}

void dense_forward(const Tensor& input, std::span<const double> weights, std::span<const double> biases,
                   Tensor& output)
{
  const int n_out = static_cast<int>(biases.size());
  const std::size_t n_in = input.size();
  if (weights.size() != n_in * n_out) {
    throw ShapeError("dense weights " + std::to_string(weights.size()) + " do not match " +
                     std::to_string(n_out) + "x" + std::to_string(n_in));
  }
  output.reshape(n_out, 1, 1);
  const double* x = input.data.data();
  for (int j = 0; j < n_out; ++j) {
    const double* row = weights.data() + j * n_in;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < n_in; ++i) acc += row[i] * x[i];
    output.data[j] = acc + biases[j];
  }
}

void dense_backward(const Tensor& input, std::span<const double> weights, const Tensor& grad_output,
                    Tensor* grad_input, std::span<double> grad_weights, std::span<double> grad_biases)
{
  const std::size_t n_in = input.size();
  const std::size_t n_out = grad_output.size();
  if (weights.size() != n_in * n_out || grad_weights.size() != weights.size() || grad_biases.size() != n_out) {
    throw ShapeError("dense backward shape mismatch");
  }
  if (grad_input) grad_input->reshape(input.channels, input.height, input.width);
  const double* x = input.data.data();
  for (std::size_t j = 0; j < n_out; ++j) {
    const double g = grad_output.data[j];
    grad_biases[j] += g;
    if (g == 0.0) continue;
    double* gw = grad_weights.data() + j * n_in;
#pragma omp simd
    for (std::size_t i = 0; i < n_in; ++i) gw[i] += g * x[i];
    if (grad_input) {
      const double* row = weights.data() + j * n_in;
      double* gi = grad_input->data.data();
#pragma omp simd
      for (std::size_t i = 0; i < n_in; ++i) gi[i] += g * row[i];
    }
  }
}

void softmax(std::span<const double> logits, std::span<double> probs)
{
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (auto& p : probs) p /= sum;
}

}  // namespace pursuit::net

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

#include "pursuit/net/saliency.hpp"

#include <algorithm>

#include "pursuit/error.hpp"

namespace pursuit::net {

namespace {

Tensor fc1_gradient(const Network& net, const events::Frame& frame, int unit, bool guided)
{
  const int fc1 = net.layer_index("fc1");
  const int units = net.layers()[fc1].out;
  if (unit < 0 || unit >= units) {
    throw Error("fc1 unit " + std::to_string(unit) + " out of range 0.." + std::to_string(units - 1));
  }
  Workspace ws;
  net.forward(frame_to_tensor(frame), ws);
  Tensor seed = Tensor::vector(units);
  seed.data[unit] = 1.0;
  net.backward(ws, fc1, seed, nullptr, guided, true);
  return ws.grad_a;
}

}  // namespace

Tensor guided_backprop(const Network& net, const events::Frame& frame, int unit)
{
  return fc1_gradient(net, frame, unit, true);
}

Tensor input_gradient(const Network& net, const events::Frame& frame, int unit)
{
  return fc1_gradient(net, frame, unit, false);
}

events::GrayImage saliency_image(const Tensor& saliency)
{
  events::GrayImage img(saliency.width, saliency.height * saliency.channels);
  const auto [lo, hi] = std::minmax_element(saliency.data.begin(), saliency.data.end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < saliency.size(); ++i) {
    img.data[i] = range > 0.0 ? (saliency.data[i] - *lo) / range : 0.0;
  }
  return img;
}

}  // namespace pursuit::net

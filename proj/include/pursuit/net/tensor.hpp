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

#include <cstddef>
#include <vector>

namespace pursuit::net {

// Dense (channels, height, width) block of doubles, row-major. Vectors are
// stored as (n, 1, 1).
struct Tensor
{
  int channels = 0;
  int height = 1;
  int width = 1;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int c, int h, int w, double fill = 0.0)
    : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, fill)
  {}

  static Tensor vector(int n, double fill = 0.0) { return Tensor(n, 1, 1, fill); }

  std::size_t size() const { return data.size(); }
  std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }

  double* plane(int c) { return data.data() + c * plane_size(); }
  const double* plane(int c) const { return data.data() + c * plane_size(); }

  double& at(int c, int y, int x) { return data[c * plane_size() + static_cast<std::size_t>(y) * width + x]; }
  double at(int c, int y, int x) const { return data[c * plane_size() + static_cast<std::size_t>(y) * width + x]; }

  // Resizes without preserving contents; keeps capacity for reuse.
  void reshape(int c, int h, int w)
  {
    channels = c;
    height = h;
    width = w;
    data.assign(static_cast<std::size_t>(c) * h * w, 0.0);
  }

  bool same_shape(const Tensor& o) const
  {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

}  // namespace pursuit::net

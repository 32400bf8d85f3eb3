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

#include <array>
#include <cstddef>

#include "pursuit/label.hpp"

namespace pursuit {

// The ten softmax probabilities, ordered
// L:S L:M L:XL C:S C:M C:XL R:S R:M R:XL N.
struct ClassOutputs
{
  std::array<double, kNumClasses> p{};

  double operator[](std::size_t i) const { return p[i]; }
  double& operator[](std::size_t i) { return p[i]; }

  double at(Region r, Size s) const { return p[static_cast<int>(r) * 3 + static_cast<int>(s)]; }
  double none() const { return p[9]; }

  double region_sum(Region r) const
  {
    if (r == Region::N) return p[9];
    const int b = static_cast<int>(r) * 3;
    return p[b] + p[b + 1] + p[b + 2];
  }
  double size_sum(Size s) const
  {
    const int k = static_cast<int>(s);
    return p[k] + p[3 + k] + p[6 + k];
  }
  double total() const
  {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }
  int argmax() const
  {
    int best = 0;
    for (int i = 1; i < kNumClasses; ++i) {
      if (p[i] > p[best]) best = i;
    }
    return best;
  }

  static ClassOutputs one_hot(int index)
  {
    ClassOutputs o;
    o.p[index] = 1.0;
    return o;
  }
  static ClassOutputs uniform()
  {
    ClassOutputs o;
    o.p.fill(1.0 / kNumClasses);
    return o;
  }
};

}  // namespace pursuit

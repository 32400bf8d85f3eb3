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

#include "fast_log.hpp"

#include <cmath>

namespace pursuit::sim {

void log_image(const double* in, double* out, std::size_t n, double eps)
{
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(in[i] + eps);
}

}  // namespace pursuit::sim

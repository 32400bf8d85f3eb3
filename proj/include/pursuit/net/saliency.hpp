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

#include "pursuit/events/frame.hpp"
#include "pursuit/net/network.hpp"

namespace pursuit::net {

// Input-sized map of d(fc1[unit])/d(input) where each ReLU passes gradient
// only if both its forward input and the incoming gradient are positive.
Tensor guided_backprop(const Network& net, const events::Frame& frame, int unit);

// Ordinary gradient of the same fc1 unit.
Tensor input_gradient(const Network& net, const events::Frame& frame, int unit);

// Min-max scaled to [0,1]; a constant map becomes all zeros.
events::GrayImage saliency_image(const Tensor& saliency);

}  // namespace pursuit::net

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

#include <string>
#include <string_view>

#include "pursuit/net/network.hpp"

namespace pursuit::net {

// "PREYNET v1" text format. Each parameterised layer is a line
//   layer <name> <kind> <dim0> <dim1> ...
// followed by its weights (row-major) then biases as shortest round-trip
// decimals, so a save/load cycle is bit exact.
inline constexpr std::string_view kWeightsMagic = "PREYNET v1";

std::string save_weights(const Network& net);

// Rebuilds the conv/pool/fc stack described by the file. With input_width
// 0 the smallest width (multiple of 3) consistent with fc1 is used.
// Errors name the offending layer.
Network load_weights(std::string_view text, int input_width = 36);

}  // namespace pursuit::net

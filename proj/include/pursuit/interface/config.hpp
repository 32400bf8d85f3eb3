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

#include <string_view>

#include "pursuit/sim/episode.hpp"

namespace pursuit::interface {

// Applies a JSON object of overrides to `base`. Unknown keys are an error
// so that typos do not go unnoticed. Throws ConfigError.
sim::EpisodeConfig episode_config_from_json(std::string_view text, sim::EpisodeConfig base = {});

sim::DetectorKind parse_detector(std::string_view s);
sim::PreyPolicy parse_prey_policy(std::string_view s);
sim::PredatorPolicy parse_predator_policy(std::string_view s);
control::SteerMode parse_steer_mode(std::string_view s);

// "t,v,w" lines (header optional), t in seconds, non-decreasing.
std::vector<sim::TimedCommand> parse_prey_script(std::string_view text);

}  // namespace pursuit::interface

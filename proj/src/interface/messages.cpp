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

#include "pursuit/interface/messages.hpp"

#include <algorithm>
#include <numbers>

#include "json.hpp"
#include "pursuit/error.hpp"

namespace pursuit::interface {

using nlohmann::json;

namespace {

json pose_json(const sim::Pose& p) { return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

sim::Pose pose_from(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()}; }

}  // namespace

StateMessage snapshot(const sim::Simulation& sim, bool paused)
{
  StateMessage m;
  m.t = static_cast<double>(sim.now_us()) * 1e-6;
  m.predator = sim.world().predator.pose;
  m.prey = sim.world().prey.pose;
  m.mode = std::string(control::to_string(sim.mode()));
  m.outputs = sim.last_outputs();
  m.alpha = sim.alpha();
  m.p_mag = sim.p_mag();
  m.dvs_rate_hz = sim.dvs_rate_hz();
  m.aps_rate_hz = sim.aps_rate_hz();
  m.dropped_frames = sim.trace().dvs_dropped;
  m.paused = paused;
  return m;
}

std::string encode_state(const StateMessage& m)
{
  json j;
  j["type"] = "state";
  j["t"] = m.t;
  j["predator"] = pose_json(m.predator);
  j["prey"] = pose_json(m.prey);
  j["mode"] = m.mode;
  j["outputs"] = m.outputs.p;
  j["alpha"] = m.alpha;
  j["p_mag"] = m.p_mag;
  j["dvs_rate_hz"] = m.dvs_rate_hz;
  j["aps_rate_hz"] = m.aps_rate_hz;
  j["dropped_frames"] = m.dropped_frames;
  j["paused"] = m.paused;
  return j.dump();
}

StateMessage decode_state(std::string_view text)
{
  try {
    const json j = json::parse(text);
    if (j.at("type").get<std::string>() != "state") throw ParseError("not a state message", 0);
    StateMessage m;
    m.t = j.at("t").get<double>();
    m.predator = pose_from(j.at("predator"));
    m.prey = pose_from(j.at("prey"));
    m.mode = j.at("mode").get<std::string>();
    const auto outputs = j.at("outputs").get<std::vector<double>>();
    if (outputs.size() != kNumClasses) throw ParseError("state message needs 10 outputs", 0);
    std::copy(outputs.begin(), outputs.end(), m.outputs.p.begin());
    m.alpha = j.at("alpha").get<double>();
    m.p_mag = j.at("p_mag").get<double>();
    m.dvs_rate_hz = j.at("dvs_rate_hz").get<double>();
    m.aps_rate_hz = j.at("aps_rate_hz").get<double>();
    m.dropped_frames = j.at("dropped_frames").get<std::int64_t>();
    m.paused = j.value("paused", false);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad state message: ") + e.what(), 0);
  }
}

ClientMessage parse_client_message(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what(), 0);
  }
  try {
    if (!j.is_object()) throw ParseError("message must be a JSON object", 0);
    const auto type = j.at("type").get<std::string>();
    if (type == "prey_cmd") {
      const double v = j.at("v").get<double>();
      const double w = j.at("w").get<double>();
      return PreyCommand{std::clamp(v, -2.0, 2.0), std::clamp(w, -std::numbers::pi, std::numbers::pi)};
    }
    if (type == "pause") {
      PauseCommand p;
      if (j.contains("paused")) p.paused = j.at("paused").get<bool>();
      return p;
    }
    if (type == "reset") return ResetCommand{j.value("seed", std::uint64_t{1})};
    throw ParseError("unknown message type '" + type + "'", 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad message: ") + e.what(), 0);
  }
}

std::string encode_client_message(const ClientMessage& m)
{
  json j;
  if (const auto* p = std::get_if<PreyCommand>(&m)) {
    j = {{"type", "prey_cmd"}, {"v", p->v}, {"w", p->w}};
  } else if (const auto* p = std::get_if<PauseCommand>(&m)) {
    j = {{"type", "pause"}};
    if (p->paused) j["paused"] = *p->paused;
  } else {
    j = {{"type", "reset"}, {"seed", std::get<ResetCommand>(m).seed}};
  }
  return j.dump();
}

}  // namespace pursuit::interface

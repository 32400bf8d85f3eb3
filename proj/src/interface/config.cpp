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

#include "pursuit/interface/config.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pursuit/error.hpp"

namespace pursuit::interface {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out)
{
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

sim::DetectorKind parse_detector(std::string_view s)
{
  if (s == "oracle") return sim::DetectorKind::Oracle;
  if (s == "net" || s == "network") return sim::DetectorKind::Network;
  throw ConfigError("unknown detector '" + std::string(s) + "' (oracle|net)");
}

sim::PreyPolicy parse_prey_policy(std::string_view s)
{
  if (s == "still") return sim::PreyPolicy::Still;
  if (s == "constant") return sim::PreyPolicy::Constant;
  if (s == "circling") return sim::PreyPolicy::Circling;
  if (s == "evading") return sim::PreyPolicy::Evading;
  if (s == "external" || s == "script") return sim::PreyPolicy::External;
  throw ConfigError("unknown prey policy '" + std::string(s) + "' (still|constant|circling|evading|script)");
}

sim::PredatorPolicy parse_predator_policy(std::string_view s)
{
  if (s == "fsm") return sim::PredatorPolicy::Fsm;
  if (s == "constant") return sim::PredatorPolicy::Constant;
  throw ConfigError("unknown predator policy '" + std::string(s) + "' (fsm|constant)");
}

control::SteerMode parse_steer_mode(std::string_view s)
{
  if (s == "digital") return control::SteerMode::Digital;
  if (s == "analog") return control::SteerMode::Analog;
  throw ConfigError("unknown steering mode '" + std::string(s) + "' (digital|analog)");
}

sim::EpisodeConfig episode_config_from_json(std::string_view text, sim::EpisodeConfig c)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(j,
               {"seed", "duration", "stop_on_capture", "width", "detector", "oracle_noise", "prey_policy", "prey_v",
                "prey_w", "predator_policy", "predator_v", "predator_w", "noise_rate", "bursts", "loop", "apf",
                "steering", "thresholds", "predator_start", "prey_start"},
               "");
    read(j, "seed", c.seed);
    read(j, "duration", c.duration);
    read(j, "stop_on_capture", c.stop_on_capture);
    read(j, "width", c.width);
    read(j, "oracle_noise", c.oracle_noise);
    read(j, "prey_v", c.prey_v);
    read(j, "prey_w", c.prey_w);
    read(j, "predator_v", c.predator_v);
    read(j, "predator_w", c.predator_w);
    read(j, "noise_rate", c.dvs.noise_rate);
    if (j.contains("detector")) c.detector = parse_detector(j.at("detector").get<std::string>());
    if (j.contains("prey_policy")) c.prey_policy = parse_prey_policy(j.at("prey_policy").get<std::string>());
    if (j.contains("predator_policy")) {
      c.predator_policy = parse_predator_policy(j.at("predator_policy").get<std::string>());
    }
    if (j.contains("bursts")) {
      c.bursts.clear();
      for (const auto& b : j.at("bursts")) {
        check_keys(b, {"start", "end", "rate"}, "bursts.");
        c.bursts.push_back({b.at("start").get<double>(), b.at("end").get<double>(), b.at("rate").get<double>()});
      }
    }
    for (const char* key : {"predator_start", "prey_start"}) {
      if (!j.contains(key)) continue;
      const auto& p = j.at(key);
      check_keys(p, {"x", "y", "theta"}, std::string(key) + ".");
      const sim::Pose pose{p.at("x").get<double>(), p.at("y").get<double>(), p.value("theta", 0.0)};
      (std::string(key) == "predator_start" ? c.predator_start : c.prey_start) = pose;
    }
    if (j.contains("loop")) {
      const auto& l = j.at("loop");
      check_keys(l,
                 {"events_per_frame", "min_inference_interval_us", "inference_latency_us", "aps_rate_hz",
                  "aps_off_policy", "aps_off_threshold", "camera_interval_us", "use_filter", "dt_us"},
                 "loop.");
      read(l, "events_per_frame", c.loop.events_per_frame);
      read(l, "min_inference_interval_us", c.loop.min_inference_interval_us);
      read(l, "inference_latency_us", c.loop.inference_latency_us);
      read(l, "aps_rate_hz", c.loop.aps_rate_hz);
      read(l, "aps_off_policy", c.loop.aps_off_policy);
      read(l, "aps_off_threshold", c.loop.aps_off_threshold);
      read(l, "camera_interval_us", c.loop.camera_interval_us);
      read(l, "use_filter", c.loop.use_filter);
      read(l, "dt_us", c.loop.dt_us);
    }
    if (j.contains("apf")) {
      const auto& a = j.at("apf");
      check_keys(a,
                 {"r_hard", "r_soft", "eta", "v_max", "window_deg", "d_goal", "goal_timeout", "lost_timeout",
                  "wander_v", "steer"},
                 "apf.");
      read(a, "r_hard", c.apf.r_hard);
      read(a, "r_soft", c.apf.r_soft);
      read(a, "eta", c.apf.eta);
      read(a, "v_max", c.apf.v_max);
      read(a, "window_deg", c.apf.window_deg);
      read(a, "d_goal", c.apf.d_goal);
      read(a, "goal_timeout", c.apf.goal_timeout);
      read(a, "lost_timeout", c.apf.lost_timeout);
      read(a, "wander_v", c.apf.wander_v);
      if (a.contains("steer")) c.apf.steer = parse_steer_mode(a.at("steer").get<std::string>());
    }
    if (j.contains("steering")) {
      const auto& s = j.at("steering");
      check_keys(s, {"r", "kappa", "tau", "dq_alpha", "dq_p"}, "steering.");
      read(s, "r", c.steering.r);
      read(s, "kappa", c.steering.kappa);
      read(s, "tau", c.steering.tau);
      read(s, "dq_alpha", c.steering.dq_alpha);
      read(s, "dq_p", c.steering.dq_p);
    }
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      check_keys(t, {"low", "high"}, "thresholds.");
      read(t, "low", c.thresholds.low);
      read(t, "high", c.thresholds.high);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::vector<sim::TimedCommand> parse_prey_script(std::string_view text)
{
  std::vector<sim::TimedCommand> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find_first_of("0123456789-.") != 0) continue;  // header
    sim::TimedCommand c;
    double* fields[3] = {&c.t, &c.v, &c.w};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      const std::size_t end = k < 2 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw ConfigError("prey script line " + std::to_string(line_no) + ": expected t,v,w");
      const std::string field = line.substr(pos, end - pos);
      const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), *fields[k]);
      if (ec != std::errc() || p != field.data() + field.size()) {
        throw ConfigError("prey script line " + std::to_string(line_no) + ": bad number '" + field + "'");
      }
      pos = end + 1;
    }
    if (!out.empty() && c.t < out.back().t) {
      throw ConfigError("prey script line " + std::to_string(line_no) + ": times must not decrease");
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace pursuit::interface

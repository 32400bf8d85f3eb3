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

#include "pursuit/sim/episode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "pursuit/error.hpp"
#include "pursuit/steering/position.hpp"

namespace pursuit::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::int64_t kRateWindowUs = 1'000'000;

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

void trim(std::deque<std::int64_t>& q, std::int64_t now)
{
  while (!q.empty() && q.front() <= now - kRateWindowUs) q.pop_front();
}

double windowed_rate(const std::deque<std::int64_t>& q, std::int64_t now)
{
  const double span = static_cast<double>(std::min(now, kRateWindowUs)) * 1e-6;
  return span > 0.0 ? static_cast<double>(q.size()) / span : 0.0;
}

}  // namespace

void LoopConfig::validate() const
{
  if (events_per_frame < 1) throw ConfigError("events per frame must be positive");
  if (min_inference_interval_us <= 0) throw ConfigError("minimum inference interval must be positive");
  if (inference_latency_us < 0) throw ConfigError("inference latency must be non-negative");
  if (!(aps_rate_hz > 0.0)) throw ConfigError("APS rate must be positive");
  if (dt_us <= 0 || dt_us > 50'000) throw ConfigError("dt must be in (0, 50] ms");
  if (camera_interval_us < dt_us || camera_interval_us % dt_us != 0) {
    throw ConfigError("camera interval must be a positive multiple of dt");
  }
  if (rate_window_us <= 0) throw ConfigError("rate window must be positive");
}

void EpisodeConfig::validate() const
{
  loop.validate();
  dvs.validate();
  apf.validate();
  steering.validate();
  events::validate_frame_width(width);
  if (apf.r_soft > laser.max_range) throw ConfigError("soft zone radius exceeds the laser range");
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (detector == DetectorKind::Network) {
    if (!network) throw ConfigError("network detector selected without a network");
    if (network->architecture().input_width != width) {
      throw ConfigError("network input width " + std::to_string(network->architecture().input_width) +
                        " does not match frame width " + std::to_string(width));
    }
  }
  if (!(thresholds.low <= thresholds.high)) throw ConfigError("size thresholds must satisfy low <= high");
}

double EpisodeTrace::mean_alpha_error() const
{
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& r : inferences) {
    if (!r.truth_visible || !r.estimate_valid) continue;
    sum += std::abs(r.bearing_est - r.bearing_gt);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

std::int64_t EpisodeTrace::alpha_samples() const
{
  return std::count_if(inferences.begin(), inferences.end(),
                       [](const InferenceRecord& r) { return r.truth_visible && r.estimate_valid; });
}

ClassOutputs oracle_outputs(const GroundTruth& truth, double noise_sigma, std::mt19937_64& rng)
{
  ClassOutputs o = truth.visible && truth.label.size ? steering::encode_position(truth.bearing_deg, *truth.label.size)
                                                     : ClassOutputs::one_hot(9);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& p : o.p) p = std::max(0.0, p + noise(rng));
  }
  const double total = o.total();
  if (!(total > 0.0)) return ClassOutputs::uniform();
  for (auto& p : o.p) p /= total;
  return o;
}

Simulation::Simulation(EpisodeConfig config)
    : config_(std::move(config)),
      renderer_(config_.arena, config_.camera),
      dvs_(config_.dvs, mix(config_.seed, 1)),
      filter_(config_.loop.filter),
      histogram_({config_.width, config_.loop.events_per_frame, config_.loop.histogram_clip}),
      steering_(config_.steering),
      rng_(mix(config_.seed, 2)),
      oracle_rng_(mix(config_.seed, 3))
{
  config_.validate();
  config_.apf.seed = mix(config_.seed, config_.apf.seed);
  world_.arena = config_.arena;

  const double margin = 1.0;
  const auto random_pose = [&] {
    return Pose{uniform(rng_, margin, world_.arena.width - margin), uniform(rng_, margin, world_.arena.height - margin),
                uniform(rng_, -std::numbers::pi, std::numbers::pi)};
  };
  world_.predator.pose = config_.predator_start ? *config_.predator_start : random_pose();
  if (config_.prey_start) {
    world_.prey.pose = *config_.prey_start;
  } else {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      world_.prey.pose = random_pose();
      if ((world_.prey.pose.position() - world_.predator.pose.position()).norm() >= 3.0) break;
    }
  }

  last_outputs_ = ClassOutputs::one_hot(9);
  renderer_.render(world_, image_);
  dvs_.reset(image_);
  scan_ = simulate_laser(world_, Role::Predator, config_.laser);
  next_laser_ = static_cast<std::int64_t>(std::llround(1e6 / config_.laser.rate_hz));
  next_camera_ = config_.loop.camera_interval_us;
  trace_.duration = 0.0;
}

void Simulation::set_prey_command(double v, double w)
{
  external_ = {std::clamp(v, -kMaxRobotSpeed, kMaxRobotSpeed), std::clamp(w, -kMaxRobotTurn, kMaxRobotTurn)};
}

void Simulation::apply_prey_policy()
{
  RobotState& prey = world_.prey;
  const double now = static_cast<double>(t_us_) * 1e-6;
  switch (config_.prey_policy) {
    case PreyPolicy::Still:
      prey.v = prey.w = 0.0;
      break;
    case PreyPolicy::Constant:
      prey.v = config_.prey_v;
      prey.w = config_.prey_w;
      break;
    case PreyPolicy::Circling:
      prey.v = config_.prey_v;
      prey.w = config_.prey_w != 0.0 ? config_.prey_w : config_.prey_v;  // 1 m radius
      break;
    case PreyPolicy::Evading: {
      // Flee from a close predator, keep off the walls, otherwise cruise.
      const Vec2 p = prey.pose.position();
      const Vec2 away = p - world_.predator.pose.position();
      const double dist = away.norm();
      Vec2 desired{std::cos(prey.pose.theta) * 0.5, std::sin(prey.pose.theta) * 0.5};
      if (dist < 4.0 && dist > 1e-9) desired = desired + away * (2.0 * (4.0 - dist) / 4.0 / dist);
      const double reach = 1.5;
      const Arena& a = world_.arena;
      if (p.x < reach) desired.x += 3.0 * (reach - p.x) / reach;
      if (a.width - p.x < reach) desired.x -= 3.0 * (reach - (a.width - p.x)) / reach;
      if (p.y < reach) desired.y += 3.0 * (reach - p.y) / reach;
      if (a.height - p.y < reach) desired.y -= 3.0 * (reach - (a.height - p.y)) / reach;
      const double err = wrap_angle(std::atan2(desired.y, desired.x) - prey.pose.theta);
      prey.w = std::clamp(2.0 * err, -1.5, 1.5);
      prey.v = config_.prey_v * std::max(0.2, std::cos(err));
      break;
    }
    case PreyPolicy::External: {
      while (script_pos_ < config_.prey_script.size() && config_.prey_script[script_pos_].t <= now + 1e-9) {
        const auto& c = config_.prey_script[script_pos_++];
        set_prey_command(c.v, c.w);
      }
      if (external_) {
        prey.v = external_->first;
        prey.w = external_->second;
        trace_.prey_commands.push_back({now, prey.v, prey.w});
        external_.reset();
      }
      break;
    }
  }
}

void Simulation::apply_results()
{
  while (!pending_.empty() && pending_.front().apply_at <= t_us_) {
    const Pending p = pending_.front();
    pending_.pop_front();
    const auto upd = steering_.update(p.outputs, static_cast<double>(p.apply_at) * 1e-6);
    decision_ = upd.decision;
    position_ = upd.raw;
    position_.alpha = upd.alpha;
    position_.p_mag = upd.p_mag;
    position_.valid = upd.position_valid;
    last_outputs_ = p.outputs;
    alpha_ = upd.alpha;
    p_mag_ = upd.p_mag;
  }
}

void Simulation::control_step()
{
  if (config_.predator_policy == PredatorPolicy::Constant) {
    world_.predator.v = config_.predator_v;
    world_.predator.w = config_.predator_w;
    return;
  }
  const double dt = static_cast<double>(config_.loop.dt_us) * 1e-6;
  const auto r = control::fsm_step(fsm_, decision_, position_, scan_, dt, config_.apf);
  fsm_ = r.state;
  world_.predator.v = r.command.v;
  world_.predator.w = r.command.w;
}

double Simulation::burst_rate(std::int64_t t0, std::int64_t t1) const
{
  // Rate-weighted overlap of (t0, t1] with each burst.
  double rate = 0.0;
  for (const auto& b : config_.bursts) {
    const double lo = std::max(static_cast<double>(t0) * 1e-6, b.start);
    const double hi = std::min(static_cast<double>(t1) * 1e-6, b.end);
    if (hi > lo) rate += b.rate * (hi - lo) / (static_cast<double>(t1 - t0) * 1e-6);
  }
  return rate;
}

double Simulation::event_rate() const
{
  const double span = static_cast<double>(std::min(t_us_, config_.loop.rate_window_us)) * 1e-6;
  return span > 0.0 ? static_cast<double>(rate_window_sum_) / span : 0.0;
}

double Simulation::dvs_rate_hz() const { return windowed_rate(recent_hist_, t_us_); }
double Simulation::aps_rate_hz() const { return windowed_rate(recent_aps_, t_us_); }

void Simulation::dispatch(const events::Frame& frame, std::int64_t t)
{
  last_inference_ = t;
  const GroundTruth truth = ground_truth(world_, config_.width, config_.thresholds, config_.camera);
  const ClassOutputs o = config_.detector == DetectorKind::Oracle
                             ? oracle_outputs(truth, config_.oracle_noise, oracle_rng_)
                             : config_.network->forward(frame);

  InferenceRecord rec;
  rec.t = t;
  rec.kind = frame.kind;
  rec.outputs = o;
  rec.raw_decision = steering::digitize(o);
  rec.truth_visible = truth.visible;
  rec.bearing_gt = truth.bearing_deg;
  const auto pos = steering::analog_position(o, config_.steering);
  if (pos.valid && pos.alpha > 0.0 && pos.alpha < 180.0) {
    rec.estimate_valid = true;
    rec.bearing_est = steering::rescale_to_fov(pos.alpha);
  }
  trace_.inferences.push_back(rec);
  pending_.push_back({t + config_.loop.inference_latency_us, o});
}

void Simulation::camera_step()
{
  if (t_us_ < next_camera_) return;
  const LoopConfig& loop = config_.loop;
  renderer_.render(world_, image_);
  const auto evs = dvs_.synthesize(image_, last_camera_, t_us_, burst_rate(last_camera_, t_us_));
  last_camera_ = t_us_;
  next_camera_ += loop.camera_interval_us;
  trace_.events_total += static_cast<std::int64_t>(evs.size());

  std::int64_t passed = 0;
  for (const auto& raw : evs) {
    const std::optional<events::Event> e = loop.use_filter ? filter_.step(raw) : std::optional<events::Event>(raw);
    if (!e) continue;
    ++passed;
    auto grid = histogram_.accumulate(*e);
    if (!grid) continue;
    trace_.histogram_times.push_back(grid->t);
    recent_hist_.push_back(grid->t);
    if (!last_inference_ || grid->t - *last_inference_ >= loop.min_inference_interval_us) {
      dispatch(events::normalize_histogram(*grid), grid->t);
      ++trace_.dvs_dispatched;
    } else {
      ++trace_.dvs_dropped;
    }
  }
  trace_.events_passed += passed;
  rate_window_.emplace_back(t_us_, passed);
  rate_window_sum_ += passed;
  while (!rate_window_.empty() && rate_window_.front().first <= t_us_ - loop.rate_window_us) {
    rate_window_sum_ -= rate_window_.front().second;
    rate_window_.pop_front();
  }

  const auto aps_due = static_cast<std::int64_t>(std::llround(static_cast<double>(aps_index_) * 1e6 / loop.aps_rate_hz));
  if (t_us_ >= aps_due) {
    ++aps_index_;
    if (loop.aps_off_policy && event_rate() < loop.aps_off_threshold) {
      ++trace_.aps_skipped;
    } else {
      aps_pending_ = true;
    }
  }
  if (aps_pending_) {
    if (!last_inference_ || t_us_ - *last_inference_ >= loop.min_inference_interval_us) {
      dispatch(events::subsample_aps(image_, config_.width, t_us_), t_us_);
      aps_pending_ = false;
      ++trace_.aps_dispatched;
      trace_.aps_times.push_back(t_us_);
      recent_aps_.push_back(t_us_);
    } else {
      ++trace_.aps_deferred;
    }
  }
  trim(recent_hist_, t_us_);
  trim(recent_aps_, t_us_);
}

void Simulation::record_tick()
{
  if (!config_.record_ticks) return;
  TickRecord r;
  r.t = t_us_;
  r.predator = world_.predator.pose;
  r.prey = world_.prey.pose;
  r.mode = fsm_.mode;
  r.decision = decision_;
  r.alpha = alpha_;
  const GroundTruth truth = ground_truth(world_, config_.width, config_.thresholds, config_.camera);
  r.alpha_gt = truth.visible ? steering::fov_to_alpha(truth.bearing_deg) : kNaN;
  r.p_mag = p_mag_;
  r.dvs_rate_hz = dvs_rate_hz();
  r.aps_rate_hz = aps_rate_hz();
  r.v = world_.predator.v;
  r.w = world_.predator.w;
  trace_.ticks.push_back(r);
}

void Simulation::tick()
{
  if (done_) return;
  apply_prey_policy();
  apply_results();
  if (t_us_ >= next_laser_) {
    scan_ = simulate_laser(world_, Role::Predator, config_.laser);
    next_laser_ += static_cast<std::int64_t>(std::llround(1e6 / config_.laser.rate_hz));
  }
  control_step();
  step(world_, static_cast<double>(config_.loop.dt_us) * 1e-6);
  t_us_ += config_.loop.dt_us;
  camera_step();
  record_tick();
  trace_.contacts = world_.contacts;
  trace_.duration = static_cast<double>(t_us_) * 1e-6;

  const bool goal = fsm_.mode == control::Mode::GoalAchieved;
  if (goal && !was_goal_) {
    const double d = (world_.prey.pose.position() - world_.predator.pose.position()).norm();
    if (d <= config_.apf.d_goal + world_.prey.length) {
      if (!trace_.capture_time) trace_.capture_time = trace_.duration;
      if (config_.stop_on_capture) done_ = true;
    } else {
      ++trace_.false_goals;
    }
  }
  was_goal_ = goal;
  if (trace_.duration >= config_.duration - 1e-9) done_ = true;
}

bool Simulation::done() const { return done_; }

void Simulation::run()
{
  while (!done_) tick();
}

EpisodeTrace run_episode(const EpisodeConfig& config)
{
  Simulation sim(config);
  sim.run();
  return sim.take_trace();
}

namespace {

void append_number(std::string& out, double v)
{
  if (std::isnan(v)) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace

std::string trace_csv(const EpisodeTrace& trace)
{
  std::string out =
      "t_us,pred_x,pred_y,pred_theta,prey_x,prey_y,prey_theta,mode,region,size,alpha,alpha_gt,p_mag,"
      "dvs_rate_hz,aps_rate_hz,v,w\n";
  for (const auto& r : trace.ticks) {
    out += std::to_string(r.t);
    for (double v : {r.predator.x, r.predator.y, r.predator.theta, r.prey.x, r.prey.y, r.prey.theta}) {
      out += ',';
      append_number(out, v);
    }
    out += ',';
    out += control::to_string(r.mode);
    out += ',';
    out += to_string(r.decision.region);
    out += ',';
    if (r.decision.size) out += to_string(*r.decision.size);
    for (double v : {r.alpha, r.alpha_gt, r.p_mag, r.dvs_rate_hz, r.aps_rate_hz, r.v, r.w}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

RateHistogram rate_histogram(const std::vector<std::int64_t>& times_us, int lo_decade, int hi_decade,
                             int bins_per_decade)
{
  if (hi_decade <= lo_decade || bins_per_decade < 1) throw ConfigError("bad rate histogram range");
  RateHistogram h;
  const int bins = (hi_decade - lo_decade) * bins_per_decade;
  for (int k = 0; k <= bins; ++k) h.edges.push_back(std::pow(10.0, lo_decade + static_cast<double>(k) / bins_per_decade));
  h.counts.assign(bins, 0);
  for (std::size_t i = 1; i < times_us.size(); ++i) {
    const auto dt = times_us[i] - times_us[i - 1];
    if (dt <= 0) {
      ++h.counts.back();
      continue;
    }
    const double rate = 1e6 / static_cast<double>(dt);
    const double pos = (std::log10(rate) - lo_decade) * bins_per_decade;
    h.counts[std::clamp(static_cast<int>(std::floor(pos)), 0, bins - 1)]++;
  }
  return h;
}

std::string trace_summary_json(const EpisodeTrace& trace)
{
  using nlohmann::json;
  json j;
  j["duration_s"] = trace.duration;
  j["captured"] = trace.capture_time.has_value();
  j["capture_time_s"] = trace.capture_time ? json(*trace.capture_time) : json(nullptr);
  j["false_goals"] = trace.false_goals;
  const double err = trace.mean_alpha_error();
  j["mean_abs_alpha_error_deg"] = std::isnan(err) ? json(nullptr) : json(err);
  j["alpha_samples"] = trace.alpha_samples();
  j["inferences"] = trace.inferences.size();
  j["dvs_frames"] = trace.histogram_times.size();
  j["dvs_dispatched"] = trace.dvs_dispatched;
  j["dvs_dropped"] = trace.dvs_dropped;
  j["aps_dispatched"] = trace.aps_dispatched;
  j["aps_skipped"] = trace.aps_skipped;
  j["aps_deferred"] = trace.aps_deferred;
  j["events_total"] = trace.events_total;
  j["events_passed"] = trace.events_passed;
  j["contacts"] = {{"predator_wall", trace.contacts.predator_wall},
                   {"prey_wall", trace.contacts.prey_wall},
                   {"robot_robot", trace.contacts.robot_robot}};
  const auto dvs = rate_histogram(trace.histogram_times);
  const auto aps = rate_histogram(trace.aps_times);
  j["rate_histogram"] = {{"edges_hz", dvs.edges}, {"dvs", dvs.counts}, {"aps", aps.counts}};
  return j.dump(2);
}

}  // namespace pursuit::sim

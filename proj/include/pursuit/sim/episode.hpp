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

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pursuit/class_outputs.hpp"
#include "pursuit/control/fsm.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/events/histogram.hpp"
#include "pursuit/net/network.hpp"
#include "pursuit/sim/camera.hpp"
#include "pursuit/sim/dvs.hpp"
#include "pursuit/sim/laser.hpp"
#include "pursuit/sim/world.hpp"
#include "pursuit/steering/decision.hpp"

namespace pursuit::sim {

struct LoopConfig
{
  int events_per_frame = 5000;
  std::int64_t min_inference_interval_us = 2000;  // 500 Hz cap
  std::int64_t inference_latency_us = 2000;       // result applied this long after dispatch
  double aps_rate_hz = 15.0;
  bool aps_off_policy = true;
  double aps_off_threshold = 1000.0;   // events/s after filtering
  std::int64_t rate_window_us = 200000;  // trailing window for the event rate
  std::int64_t dt_us = 1000;
  std::int64_t camera_interval_us = 4000;  // render/synthesis period for DVS
  bool use_filter = true;
  events::FilterConfig filter;
  int histogram_clip = 16;
  void validate() const;
};

enum class DetectorKind { Oracle, Network };
enum class PredatorPolicy { Fsm, Constant };
enum class PreyPolicy { Still, Constant, Circling, Evading, External };

struct TimedCommand
{
  double t = 0.0;  // s
  double v = 0.0;
  double w = 0.0;
};

// Extra uniform noise over [start, end).
struct NoiseBurst
{
  double start = 0.0;  // s
  double end = 0.0;
  double rate = 0.0;   // events/s
};

struct EpisodeConfig
{
  std::uint64_t seed = 1;
  double duration = 60.0;  // s
  bool stop_on_capture = true;
  int width = 36;

  Arena arena;
  CameraConfig camera;
  DvsConfig dvs;
  LaserConfig laser;
  LoopConfig loop;
  control::ApfParams apf;
  steering::SteeringParams steering;
  SizeThresholds thresholds;

  DetectorKind detector = DetectorKind::Oracle;
  double oracle_noise = 0.05;
  std::shared_ptr<const net::Network> network;

  PredatorPolicy predator_policy = PredatorPolicy::Fsm;
  double predator_v = 0.0;
  double predator_w = 0.0;
  PreyPolicy prey_policy = PreyPolicy::Evading;
  double prey_v = 0.5;
  double prey_w = 0.0;
  std::vector<TimedCommand> prey_script;  // replayed in External mode

  // Start poses; drawn from the seed when absent.
  std::optional<Pose> predator_start;
  std::optional<Pose> prey_start;

  std::vector<NoiseBurst> bursts;
  bool record_ticks = true;

  void validate() const;
};

struct TickRecord
{
  std::int64_t t = 0;  // us, after the step
  Pose predator;
  Pose prey;
  control::Mode mode = control::Mode::Wander;
  Label decision;
  double alpha = 0.0;      // low-passed estimate, degrees
  double alpha_gt = 0.0;   // NaN when the prey is not in view
  double p_mag = 0.0;
  double dvs_rate_hz = 0.0;  // histograms over the trailing second
  double aps_rate_hz = 0.0;
  double v = 0.0;
  double w = 0.0;
};

struct InferenceRecord
{
  std::int64_t t = 0;  // dispatch time, us
  events::FrameKind kind = events::FrameKind::Dvs;
  ClassOutputs outputs;
  Label raw_decision;
  bool truth_visible = false;
  double bearing_gt = 0.0;   // in-image degrees, positive right
  double bearing_est = 0.0;  // from the unfiltered position vector
  bool estimate_valid = false;
};

struct EpisodeTrace
{
  std::vector<TickRecord> ticks;
  std::vector<InferenceRecord> inferences;
  std::vector<std::int64_t> histogram_times;  // every completed DVS histogram
  std::vector<std::int64_t> aps_times;        // dispatched APS frames
  std::vector<TimedCommand> prey_commands;    // external commands as applied
  std::int64_t dvs_dispatched = 0;
  std::int64_t dvs_dropped = 0;
  std::int64_t aps_dispatched = 0;
  std::int64_t aps_skipped = 0;   // APS-off policy
  std::int64_t aps_deferred = 0;  // postponed by the inference cap
  std::int64_t events_total = 0;
  std::int64_t events_passed = 0;
  std::optional<double> capture_time;
  ContactCounters contacts;
  double duration = 0.0;

  // Mean |bearing_est - bearing_gt| in field-of-view degrees over
  // inferences where the prey is in view and the estimate is valid.
  double mean_alpha_error() const;
  std::int64_t alpha_samples() const;
  std::int64_t false_goals = 0;  // GoalAchieved entered with the prey not at hand
};

// Ground-truth-shaped outputs: ideal soft outputs for the true bearing and
// size (or one-hot N), plus Gaussian noise, clipped and renormalized.
ClassOutputs oracle_outputs(const GroundTruth& truth, double noise_sigma, std::mt19937_64& rng);

// Live simulation. One tick = one dt step.
class Simulation
{
public:
  explicit Simulation(EpisodeConfig config);

  void tick();
  bool done() const;
  void run();

  // External prey command, applied at the start of the next tick.
  void set_prey_command(double v, double w);

  const World& world() const { return world_; }
  const EpisodeTrace& trace() const { return trace_; }
  EpisodeTrace take_trace() { return std::move(trace_); }
  const EpisodeConfig& config() const { return config_; }
  std::int64_t now_us() const { return t_us_; }
  control::Mode mode() const { return fsm_.mode; }
  const ClassOutputs& last_outputs() const { return last_outputs_; }
  double alpha() const { return alpha_; }
  double p_mag() const { return p_mag_; }
  double dvs_rate_hz() const;
  double aps_rate_hz() const;

private:
  struct Pending
  {
    std::int64_t apply_at;
    ClassOutputs outputs;
  };

  void apply_prey_policy();
  void apply_results();
  void control_step();
  void camera_step();
  void dispatch(const events::Frame& frame, std::int64_t t);
  double event_rate() const;
  double burst_rate(std::int64_t t0, std::int64_t t1) const;
  void record_tick();

  EpisodeConfig config_;
  World world_;
  SceneRenderer renderer_;
  DvsSynthesizer dvs_;
  events::BackgroundActivityFilter filter_;
  events::HistogramAccumulator histogram_;
  steering::SteeringState steering_;
  control::FsmState fsm_;
  control::VelocityCommand command_;
  control::LaserScan scan_;
  std::mt19937_64 rng_;
  std::mt19937_64 oracle_rng_;
  events::GrayImage image_;

  std::int64_t t_us_ = 0;
  std::int64_t next_camera_ = 0;
  std::int64_t aps_index_ = 0;
  std::int64_t next_laser_ = 0;
  std::int64_t last_camera_ = 0;
  std::optional<std::int64_t> last_inference_;
  bool aps_pending_ = false;
  std::deque<Pending> pending_;
  std::deque<std::pair<std::int64_t, std::int64_t>> rate_window_;  // (t, passed events)
  std::int64_t rate_window_sum_ = 0;
  std::optional<std::pair<double, double>> external_;
  std::size_t script_pos_ = 0;
  std::deque<std::int64_t> recent_hist_;
  std::deque<std::int64_t> recent_aps_;
  bool was_goal_ = false;
  Label decision_{Region::N, std::nullopt};
  steering::PositionVector position_;
  ClassOutputs last_outputs_;
  double alpha_ = 90.0;
  double p_mag_ = 0.0;
  EpisodeTrace trace_;
  bool done_ = false;
};

EpisodeTrace run_episode(const EpisodeConfig& config);

// Trace exports.
std::string trace_csv(const EpisodeTrace& trace);
std::string trace_summary_json(const EpisodeTrace& trace);

// Log-spaced rate histogram of instantaneous rates 1/dt between consecutive
// timestamps; bin edges 10^(k/bins_per_decade) Hz from 10^lo to 10^hi.
struct RateHistogram
{
  std::vector<double> edges;
  std::vector<std::int64_t> counts;
};
RateHistogram rate_histogram(const std::vector<std::int64_t>& times_us, int lo_decade = -2, int hi_decade = 4,
                             int bins_per_decade = 4);

}  // namespace pursuit::sim

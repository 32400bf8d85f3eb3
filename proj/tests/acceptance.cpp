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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Arguments select a subset by number; the
// first non-numeric argument is taken as the path of the CLI binary used
// by the determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gradcheck.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/interface/bench.hpp"
#include "pursuit/net/network.hpp"
#include "pursuit/net/train.hpp"
#include "pursuit/net/weights_io.hpp"
#include "pursuit/sim/dataset.hpp"
#include "pursuit/sim/episode.hpp"
#include "pursuit/sim/evaluate.hpp"
#include "pursuit/steering/decision.hpp"
#include "pursuit/steering/position.hpp"
#include "steering_oracle.hpp"

using namespace pursuit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome architecture()
{
  const net::Network n(net::Architecture{});
  std::vector<int> chain;
  const auto shapes = n.shape_chain();
  // input, conv1, pool1, conv2, pool2, flatten, fc1, fc2
  for (int i : {0, 1, 3, 4, 6}) chain.push_back(shapes[i].height);
  chain.push_back(static_cast<int>(shapes[6].size() == 0 ? shapes[6].channels * shapes[6].height * shapes[6].width
                                                         : shapes[6].size()));
  chain.push_back(shapes[7].channels);
  chain.push_back(shapes[9].channels);
  const std::vector<int> expected{36, 36, 18, 18, 9, 1620, 100, 10};
  const bool ok = n.conv_weight_count() == 5250 && n.layer_weight_count("fc1") == 162'000 && chain == expected;
  std::string c;
  for (int v : chain) c += (c.empty() ? "" : "->") + std::to_string(v);
  return {ok, fmt("conv weights %zu, fc1 weights %zu, chain %s", n.conv_weight_count(), n.layer_weight_count("fc1"),
                  c.c_str())};
}

Outcome gradients()
{
  const auto t0 = Clock::now();
  gradcheck::Result all;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    gradcheck::merge(all, gradcheck::network_instance(s));
    gradcheck::merge(all, gradcheck::conv_instance(s));
    gradcheck::merge(all, gradcheck::dense_instance(s));
    gradcheck::merge(all, gradcheck::pool_relu_instance(s));
  }
  const double secs = seconds_since(t0);
  return {all.max_rel < 1e-4 && secs < 10.0,
          fmt("max relative error %.2e over %zu coordinates (%zu at kinks skipped), %.2f s", all.max_rel, all.checked,
              all.skipped, secs)};
}

Outcome latency()
{
  const auto s = interface::forward_latency(net::Network(net::Architecture{}, 1), 1000, 1);
  return {s.median_ms <= 2.0, interface::format_latency(s)};
}

// A vertical edge sweeping back and forth across the array at 200 px/s;
// each row of a column fires once (probability 0.9) within 1 ms of the
// crossing. Uniform Poisson noise at 5 keps on top.
Outcome noise_filter()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  struct Labeled
  {
    events::Event e;
    bool signal;
  };
  std::vector<Labeled> stream;
  std::uniform_real_distribution<double> jitter(0.0, 1000.0), u(0.0, 1.0);
  const double speed = 200.0;  // px/s
  const double sweep = 240.0 / speed;
  const double duration = 6.0;
  for (double start = 0.0; start + sweep <= duration + 1e-9; start += sweep) {
    const bool forward = static_cast<int>(std::lround(start / sweep)) % 2 == 0;
    for (int k = 0; k < 240; ++k) {
      const int x = forward ? k : 239 - k;
      const double tc = (start + k / speed) * 1e6;
      for (int y = 0; y < 180; ++y) {
        if (u(rng) > 0.9) continue;
        stream.push_back({{static_cast<std::int64_t>(tc + jitter(rng)), static_cast<std::uint16_t>(x),
                           static_cast<std::uint16_t>(y), forward ? events::Polarity::On : events::Polarity::Off},
                          true});
      }
    }
  }
  std::exponential_distribution<double> gap(5000.0);
  std::uniform_int_distribution<int> px(0, 239), py(0, 179), pol(0, 1);
  for (double t = gap(rng); t < duration; t += gap(rng)) {
    stream.push_back({{static_cast<std::int64_t>(t * 1e6), static_cast<std::uint16_t>(px(rng)),
                       static_cast<std::uint16_t>(py(rng)), pol(rng) ? events::Polarity::On : events::Polarity::Off},
                      false});
  }
  std::stable_sort(stream.begin(), stream.end(), [](const Labeled& a, const Labeled& b) { return a.e.t < b.e.t; });

  events::BackgroundActivityFilter f({10'000, 1});
  std::int64_t signal = 0, noise = 0, signal_kept = 0, noise_kept = 0;
  for (const auto& l : stream) {
    const bool kept = f.step(l.e).has_value();
    (l.signal ? signal : noise)++;
    if (kept) (l.signal ? signal_kept : noise_kept)++;
  }
  const double removed = 1.0 - static_cast<double>(noise_kept) / static_cast<double>(noise);
  const double retained = static_cast<double>(signal_kept) / static_cast<double>(signal);
  const double secs = seconds_since(t0);
  return {removed >= 0.9 && retained >= 0.9 && secs < 30.0,
          fmt("noise removed %.2f%% of %lld, signal retained %.2f%% of %lld, %.2f s", 100.0 * removed,
              static_cast<long long>(noise), 100.0 * retained, static_cast<long long>(signal), secs)};
}

Outcome position_properties()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const steering::SteeringParams params;
  std::int64_t swap_fail = 0, atan_checked = 0, atan_fail = 0;
  double worst_atan = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const auto o = oracle::random_outputs(rng);
    const auto pv = steering::analog_position(o, params);
    const auto sw = steering::analog_position(oracle::swap_left_right(o), params);
    if (sw.dx != -pv.dx) ++swap_fail;
    const auto ref = oracle::project(o, params.r);
    if (ref.dy != 0.0) {
      ++atan_checked;
      const double d = std::abs(pv.alpha - oracle::piecewise_alpha(ref.dx, ref.dy));
      worst_atan = std::max(worst_atan, d);
      if (!(d <= 1e-9)) ++atan_fail;
    }
  }
  const double cm = steering::analog_position(ClassOutputs::one_hot(4), params).alpha;
  const double ps = steering::analog_position(ClassOutputs::one_hot(3), params).p_mag;
  const double pxl = steering::analog_position(ClassOutputs::one_hot(5), params).p_mag;
  const double secs = seconds_since(t0);
  const bool ok = swap_fail == 0 && std::abs(cm - 90.0) <= 1e-9 && ps > pxl && atan_fail == 0 && secs < 10.0;
  return {ok, fmt("swap failures %lld; C:M alpha %.12f; |p| S %.4f > XL %.4f; piecewise vs atan2 worst %.2e over %lld; "
                  "%.2f s",
                  static_cast<long long>(swap_fail), cm, ps, pxl, worst_atan, static_cast<long long>(atan_checked), secs)};
}

Outcome constraints()
{
  auto forbidden = [](const Label& a, const Label& b) {
    const auto ra = a.region, rb = b.region;
    const bool region = (ra == Region::L && rb == Region::R) || (ra == Region::R && rb == Region::L) ||
                        (ra == Region::C && rb == Region::N) || (ra == Region::N && rb == Region::C);
    const bool size = a.size && b.size &&
                      ((*a.size == Size::S && *b.size == Size::XL) || (*a.size == Size::XL && *b.size == Size::S));
    return region || size;
  };
  std::int64_t transitions = 0, violations = 0;
  std::function<void(const steering::ConstraintFilter&, const Label&, int)> walk =
      [&](const steering::ConstraintFilter& f, const Label& prev, int depth) {
        if (depth == 0) return;
        for (int k = 0; k < kNumClasses; ++k) {
          auto next = f;
          const Label out = next.apply(Label::from_class(k));
          ++transitions;
          if (forbidden(prev, out)) ++violations;
          walk(next, out, depth - 1);
        }
      };
  for (int k = 0; k < kNumClasses; ++k) {
    steering::ConstraintFilter f;
    const Label first = f.apply(Label::from_class(k));
    walk(f, first, 5);
  }
  return {violations == 0 && transitions > 0,
          fmt("%lld filtered transitions over all input sequences of length 6, %lld forbidden",
              static_cast<long long>(transitions), static_cast<long long>(violations))};
}

Outcome rate_semantics()
{
  // 10 Meps for one second: 10e6 / 5000 = 2000 histograms/s demanded.
  sim::EpisodeConfig burst;
  burst.seed = 1;
  burst.duration = 2.0;
  burst.stop_on_capture = false;
  burst.record_ticks = false;
  burst.bursts.push_back({0.5, 1.5, 10e6});
  const auto t = sim::run_episode(burst);
  std::int64_t in_burst = 0;
  for (auto h : t.histogram_times) in_burst += h >= 500'000 && h < 1'500'000;
  std::int64_t min_gap = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 1; i < t.inferences.size(); ++i) min_gap = std::min(min_gap, t.inferences[i].t - t.inferences[i - 1].t);
  const bool burst_ok = min_gap >= 2000 && t.dvs_dropped > 0 && in_burst >= 1900;

  sim::EpisodeConfig still;
  still.seed = 1;
  still.duration = 5.0;
  still.stop_on_capture = false;
  still.record_ticks = false;
  still.predator_policy = sim::PredatorPolicy::Constant;
  still.prey_policy = sim::PreyPolicy::Still;
  still.dvs.noise_rate = 0.0;
  const auto s = sim::run_episode(still);
  const bool still_ok = s.histogram_times.empty() && s.aps_dispatched == 0;

  return {burst_ok && still_ok,
          fmt("burst: %lld histograms/s realized, %zu inferences, min interval %lld us, %lld dropped; "
              "static: %zu DVS frames, %lld APS dispatched (%lld skipped)",
              static_cast<long long>(in_burst), t.inferences.size(), static_cast<long long>(min_gap),
              static_cast<long long>(t.dvs_dropped), s.histogram_times.size(), static_cast<long long>(s.aps_dispatched),
              static_cast<long long>(s.aps_skipped))};
}

Outcome closed_loop()
{
  const auto t0 = Clock::now();
  int captures = 0;
  std::int64_t wall_contacts = 0, samples = 0;
  double err_sum = 0.0;
  std::string times;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sim::EpisodeConfig c;
    c.seed = seed;
    c.duration = 60.0;
    c.detector = sim::DetectorKind::Oracle;
    c.oracle_noise = 0.05;
    c.prey_policy = sim::PreyPolicy::Evading;
    c.record_ticks = false;
    const auto t = sim::run_episode(c);
    if (t.capture_time && *t.capture_time <= 60.0) ++captures;
    wall_contacts += t.contacts.predator_wall;
    err_sum += t.mean_alpha_error() * static_cast<double>(t.alpha_samples());
    samples += t.alpha_samples();
    times += t.capture_time ? fmt(" %.1f", *t.capture_time) : std::string(" -");
  }
  const double mean_err = samples ? err_sum / static_cast<double>(samples) : NAN;
  return {captures >= 9 && wall_contacts == 0 && mean_err <= 7.1,
          fmt("%d/10 captures (s:%s), %lld wall-contact steps, mean |alpha - alpha_gt| %.2f deg over %lld frames, %.0f s",
              captures, times.c_str(), static_cast<long long>(wall_contacts), mean_err, static_cast<long long>(samples),
              seconds_since(t0))};
}

Outcome learning()
{
  const auto t0 = Clock::now();
  sim::DatasetConfig dc;
  dc.seed = 1;
  dc.mirror = true;
  dc.exposure_copies = 2;
  const auto train = sim::make_dataset(dc, 20'000);
  sim::DatasetConfig tc = dc;
  tc.seed = 2;
  tc.thresholds = train.thresholds;
  tc.mirror = false;
  tc.exposure_copies = 0;
  const auto test = sim::make_dataset(tc, 4000);
  const double gen_secs = seconds_since(t0);
  std::printf("  [9] %zu training frames, %zu test frames generated in %.0f s\n", train.samples.size(),
              test.samples.size(), gen_secs);
  std::fflush(stdout);

  std::vector<ClassOutputs> targets;
  targets.reserve(train.samples.size());
  for (const auto& s : train.samples) targets.push_back(sim::soft_target(s));
  std::vector<net::Example> examples;
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    examples.push_back({&train.samples[i].frame, train.samples[i].label.class_index(), &targets[i]});
  }
  net::TrainConfig cfg;
  cfg.epochs = 8;
  net::Network model(net::Architecture{}, 1);
  net::fit(model, examples, cfg, [&](int epoch, double loss) {
    std::printf("  [9] epoch %d loss %.4f (%.0f s)\n", epoch + 1, loss, seconds_since(t0));
    std::fflush(stdout);
  });
  std::ofstream("acceptance_net.txt") << net::save_weights(model);
  const auto e = sim::evaluate(model, test.samples);
  const double secs = seconds_since(t0);
  const double limit = 0.087 * steering::kFovDeg;
  return {train.samples.size() >= 50'000 && e.accuracy() >= 0.80 && e.mean_angle_error() <= limit && secs <= 1800.0,
          fmt("%zu training frames; test accuracy %.2f%% over %lld; angle error %.2f deg (limit %.2f) over %lld/%lld "
              "visible; %.0f s",
              train.samples.size(), 100.0 * e.accuracy(), static_cast<long long>(e.total), e.mean_angle_error(), limit,
              static_cast<long long>(e.angle_samples), static_cast<long long>(e.visible), secs)};
}

Outcome determinism(const std::string& cli)
{
  if (cli.empty() || !std::filesystem::exists(cli)) return {false, "CLI binary not found: '" + cli + "'"};
  const auto dir = std::filesystem::temp_directory_path() / "pursuit_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  for (const auto& out : {a, b}) {
    const std::string cmd = "\"" + cli + "\" sim --seed 1 --out \"" + out.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "sim run failed: " + cmd};
  }
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const auto x = slurp(a), y = slurp(b);
  std::filesystem::remove_all(dir);
  return {!x.empty() && x == y, fmt("two traces of %zu bytes, %s", x.size(), x == y ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv)
{
  std::set<int> only;
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (!a.empty() && std::all_of(a.begin(), a.end(), ::isdigit)) {
      only.insert(std::stoi(a));
    } else if (cli.empty()) {
      cli = a;
    }
  }
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"architecture audit", architecture}},
      {2, {"gradient check", gradients}},
      {3, {"forward latency", latency}},
      {4, {"noise filter", noise_filter}},
      {5, {"position vector properties", position_properties}},
      {6, {"constraint enumeration", constraints}},
      {7, {"rate semantics", rate_semantics}},
      {8, {"oracle closed loop", closed_loop}},
      {9, {"learning", learning}},
      {10, {"determinism", [&] { return determinism(cli); }}},
  };
  int failed = 0;
  for (const auto& [id, entry] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %-27s %s\n", o.pass ? "PASS" : "FAIL", id, entry.first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

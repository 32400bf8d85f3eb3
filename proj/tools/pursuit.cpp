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

// Command-line front end: event filtering and histograms, dataset
// synthesis, training, inference, headless episodes, the live service and
// benchmarks.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pursuit/error.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/events/event.hpp"
#include "pursuit/events/histogram.hpp"
#include "pursuit/interface/bench.hpp"
#include "pursuit/interface/config.hpp"
#include "pursuit/interface/live.hpp"
#include "pursuit/interface/server.hpp"
#include "pursuit/net/train.hpp"
#include "pursuit/net/weights_io.hpp"
#include "pursuit/sim/dataset.hpp"
#include "pursuit/sim/episode.hpp"
#include "pursuit/sim/evaluate.hpp"
#include "pursuit/steering/decision.hpp"

namespace fs = std::filesystem;
using namespace pursuit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kDiverged = 3 };

class IoError : public Error
{
public:
  using Error::Error;
};

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view data)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    throw IoError("cannot write " + path.string());
  }
}

events::EventFormat format_for(const fs::path& path, std::string_view bytes)
{
  if (path.extension() == ".csv") return events::EventFormat::Csv;
  if (path.extension() == ".evt1" || path.extension() == ".bin") return events::EventFormat::Evt1;
  return events::detect_format(bytes);
}

std::atomic<bool> g_interrupted{false};
void on_signal(int) { g_interrupted = true; }

// Options shared by `sim` and `serve`.
struct EpisodeOptions
{
  std::string config_file;
  std::uint64_t seed = 1;
  double duration = 60.0;
  std::string detector = "oracle";
  std::string weights;
  std::string prey = "evading";
  std::string prey_script;
  double prey_v = 0.5;
  double prey_w = 0.0;
  std::string predator = "fsm";
  double predator_v = 0.0;
  double predator_w = 0.0;
  double noise_rate = 0.0;
  std::vector<double> burst;
  bool no_aps_off = false;
  bool no_filter = false;
  std::string steer = "digital";

  void add(CLI::App* app, bool live)
  {
    app->add_option("--config", config_file, "JSON file with episode overrides")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Episode seed");
    if (!live) app->add_option("--duration", duration, "Simulated seconds");
    app->add_option("--detector", detector, "oracle|net");
    app->add_option("--weights", weights, "Weights file for --detector net");
    if (!live) {
      app->add_option("--prey", prey, "still|constant|circling|evading|script");
      app->add_option("--prey-script", prey_script, "CSV of t,v,w prey commands (implies --prey script)");
      app->add_option("--prey-v", prey_v, "Prey speed, m/s");
      app->add_option("--prey-w", prey_w, "Prey turn rate, rad/s");
    }
    app->add_option("--predator", predator, "fsm|constant");
    app->add_option("--predator-v", predator_v, "Predator speed for --predator constant");
    app->add_option("--predator-w", predator_w, "Predator turn rate for --predator constant");
    app->add_option("--noise-rate", noise_rate, "Background DVS noise, events/s");
    app->add_option("--burst", burst, "Noise burst: start_s end_s rate_eps")->expected(3);
    app->add_flag("--no-aps-off", no_aps_off, "Keep APS frames on at low event rates");
    app->add_flag("--no-filter", no_filter, "Disable the background activity filter");
    app->add_option("--steer", steer, "digital|analog");
  }

  sim::EpisodeConfig build() const
  {
    sim::EpisodeConfig c;
    c.seed = seed;
    c.duration = duration;
    c.detector = interface::parse_detector(detector);
    c.prey_policy = interface::parse_prey_policy(prey);
    c.prey_v = prey_v;
    c.prey_w = prey_w;
    c.predator_policy = interface::parse_predator_policy(predator);
    c.predator_v = predator_v;
    c.predator_w = predator_w;
    c.dvs.noise_rate = noise_rate;
    if (burst.size() == 3) c.bursts.push_back({burst[0], burst[1], burst[2]});
    c.loop.aps_off_policy = !no_aps_off;
    c.loop.use_filter = !no_filter;
    c.apf.steer = interface::parse_steer_mode(steer);
    if (!config_file.empty()) c = interface::episode_config_from_json(read_file(config_file), c);
    if (!prey_script.empty()) {
      c.prey_policy = sim::PreyPolicy::External;
      c.prey_script = interface::parse_prey_script(read_file(prey_script));
    }
    if (c.detector == sim::DetectorKind::Network) {
      if (weights.empty()) throw ConfigError("--detector net needs --weights");
      c.network = std::make_shared<const net::Network>(net::load_weights(read_file(weights), c.width));
    }
    return c;
  }
};

int cmd_filter(const std::string& in_path, const std::string& out_path, std::int64_t dt_max, int radius)
{
  const std::string bytes = read_file(in_path);
  const auto format = format_for(in_path, bytes);
  const auto input = events::parse_events(bytes, format);
  events::BackgroundActivityFilter filter({dt_max, radius});
  std::vector<events::Event> kept;
  for (const auto& e : input) {
    if (auto p = filter.step(e)) kept.push_back(*p);
  }
  write_file(out_path, events::encode_events(kept, format_for(out_path, bytes)));
  std::printf("%zu events in, %zu passed (%.1f%%)\n", input.size(), kept.size(),
              input.empty() ? 0.0 : 100.0 * static_cast<double>(kept.size()) / static_cast<double>(input.size()));
  return kOk;
}

int cmd_hist(const std::string& in_path, const std::string& out_dir, int width, int per_frame, bool filter_on)
{
  const std::string bytes = read_file(in_path);
  const auto input = events::parse_events(bytes, format_for(in_path, bytes));
  events::BackgroundActivityFilter filter;
  events::HistogramAccumulator hist({width, per_frame, 16});
  fs::create_directories(out_dir);
  int n = 0;
  for (const auto& e : input) {
    const auto p = filter_on ? filter.step(e) : std::optional<events::Event>(e);
    if (!p) continue;
    if (auto grid = hist.accumulate(*p)) {
      char name[32];
      std::snprintf(name, sizeof name, "%06d.pgm", n++);
      write_file(fs::path(out_dir) / name, events::encode_pgm(events::normalize_histogram(*grid)));
      std::printf("%s t=%lld us\n", name, static_cast<long long>(grid->t));
    }
  }
  std::printf("%d frames, %d events left over\n", n, hist.collected());
  return kOk;
}

int cmd_infer(const std::string& weights, const std::string& frame_path, const std::string& kind)
{
  const auto net = net::load_weights(read_file(weights), 0);
  const auto frame = events::frame_from_pgm(read_file(frame_path),
                                            kind == "dvs" ? events::FrameKind::Dvs : events::FrameKind::Aps);
  if (frame.width != net.architecture().input_width) {
    throw ShapeError("frame width " + std::to_string(frame.width) + " does not match network input " +
                     std::to_string(net.architecture().input_width));
  }
  const ClassOutputs o = net.forward(frame);
  for (int k = 0; k < kNumClasses; ++k) {
    std::printf("%-5s %.6f\n", to_string(Label::from_class(k)).c_str(), o[k]);
  }
  const auto decision = steering::digitize(o);
  const auto pos = steering::analog_position(o);
  std::printf("decision %s\n", to_string(decision).c_str());
  if (pos.valid) {
    std::printf("alpha %.3f deg  |p| %.3f m\n", pos.alpha, pos.p_mag);
  } else {
    std::printf("alpha - (prey not visible)  |p| -\n");
  }
  return kOk;
}

int cmd_synth(const std::string& out_dir, std::int64_t frames, std::uint64_t seed, int width, double visible,
              double dvs, bool no_mirror, int exposure)
{
  sim::DatasetConfig c;
  c.seed = seed;
  c.width = width;
  c.visible_fraction = visible;
  c.dvs_fraction = dvs;
  c.mirror = !no_mirror;
  c.exposure_copies = exposure;
  const auto data = sim::make_dataset(c, frames);
  sim::save_dataset(data, out_dir);
  std::printf("%zu frames (%lld base), size thresholds S < %.3f px <= M <= %.3f px < XL\n%s", data.samples.size(),
              static_cast<long long>(frames), data.thresholds.low, data.thresholds.high,
              sim::class_balance_report(data).c_str());
  return kOk;
}

struct TrainOptions
{
  std::string data;
  std::string test;
  std::int64_t synth = 0;
  std::string out = "weights.txt";
  net::TrainConfig cfg;
  bool hard_targets = false;
};

int cmd_train(const TrainOptions& o)
{
  sim::Dataset train;
  if (!o.data.empty()) {
    train = sim::load_dataset(o.data);
  } else if (o.synth > 0) {
    sim::DatasetConfig c;
    c.seed = o.cfg.seed;
    train = sim::make_dataset(c, o.synth);
  } else {
    throw ConfigError("train needs --data DIR or --synth N");
  }
  std::printf("training on %zu frames\n", train.samples.size());
  std::vector<ClassOutputs> targets;
  targets.reserve(train.samples.size());
  for (const auto& s : train.samples) targets.push_back(sim::soft_target(s));
  std::vector<net::Example> examples;
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    examples.push_back({&train.samples[i].frame, train.samples[i].label.class_index(),
                        o.hard_targets ? nullptr : &targets[i]});
  }
  net::Network model(net::Architecture{train.width}, o.cfg.seed);
  const auto t0 = std::chrono::steady_clock::now();
  net::fit(model, examples, o.cfg, [&](int epoch, double loss) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("epoch %d  loss %.5f  (%.0f s)\n", epoch + 1, loss, s);
    std::fflush(stdout);
  });
  write_file(o.out, net::save_weights(model));
  std::printf("wrote %s\n", o.out.c_str());
  if (!o.test.empty()) {
    const auto test = sim::load_dataset(o.test);
    std::printf("%s", sim::evaluate(model, test.samples).report().c_str());
  }
  return kOk;
}

int cmd_sim(const EpisodeOptions& opts, const std::string& out, const std::string& summary)
{
  const auto trace = sim::run_episode(opts.build());
  if (!out.empty()) write_file(out, sim::trace_csv(trace));
  const std::string json = sim::trace_summary_json(trace);
  if (!summary.empty()) write_file(summary, json);
  std::printf("%s\n", json.c_str());
  return kOk;
}

int cmd_serve(const EpisodeOptions& opts, const std::string& address, unsigned short port, double seconds,
              const std::string& trace_out)
{
  auto config = interface::live_config(opts.build());
  config.record_ticks = !trace_out.empty();
  interface::LiveSession session(config);
  interface::StateServer server(session, {address, port, 20.0});
  server.start();
  session.start();
  std::printf("serving on ws://%s:%u\n", address.c_str(), server.port());
  std::fflush(stdout);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const auto t0 = std::chrono::steady_clock::now();
  while (!g_interrupted) {
    if (seconds > 0.0 && std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= seconds) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  session.stop();
  server.stop();
  if (!trace_out.empty()) write_file(trace_out, sim::trace_csv(session.trace()));
  std::printf("stopped; %lld malformed messages\n", static_cast<long long>(server.malformed_messages()));
  return kOk;
}

int cmd_bench(const std::string& net_spec, int runs, double episode_seconds)
{
  const net::Network model = net_spec == "default" ? net::Network(net::Architecture{}, 1)
                                                   : net::load_weights(read_file(net_spec), 0);
  const auto lat = interface::forward_latency(model, runs);
  std::printf("forward pass: %s (target median <= 2 ms: %s)\n", interface::format_latency(lat).c_str(),
              lat.median_ms <= 2.0 ? "met" : "missed");
  const auto f = interface::filter_throughput();
  std::printf("background filter: %.2f Meps over %lld events (%lld passed)\n", f.events_per_second() / 1e6,
              static_cast<long long>(f.events), static_cast<long long>(f.passed));
  if (episode_seconds > 0.0) {
    sim::EpisodeConfig c;
    c.duration = episode_seconds;
    c.stop_on_capture = false;
    c.record_ticks = false;
    const auto trace = sim::run_episode(c);
    const auto h = sim::rate_histogram(trace.histogram_times);
    std::printf("DVS histogram rate over a %.0f s episode (%zu frames):\n", episode_seconds,
                trace.histogram_times.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      if (h.counts[i] == 0) continue;
      std::printf("  %9.3f - %9.3f Hz  %lld\n", h.edges[i], h.edges[i + 1], static_cast<long long>(h.counts[i]));
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Event-camera predator/prey pursuit toolkit"};
  app.require_subcommand(1);

  std::string in, out, dir, weights, frame, kind = "dvs", summary;
  std::int64_t dt_max = 10'000;
  int radius = 1, width = 36, per_frame = 5000;
  bool no_filter = false;

  auto* filter = app.add_subcommand("filter", "Background activity filter over an event file");
  filter->add_option("--in", in, "Input events (EVT1 or CSV)")->required()->check(CLI::ExistingFile);
  filter->add_option("--out", out, "Output events; format from extension")->required();
  filter->add_option("--dt-max-us", dt_max, "Correlation window, microseconds");
  filter->add_option("--radius", radius, "Neighbourhood radius, pixels");

  auto* hist = app.add_subcommand("hist", "Accumulate events into normalized histogram frames (PGM)");
  hist->add_option("--in", in, "Input events (EVT1 or CSV)")->required()->check(CLI::ExistingFile);
  hist->add_option("--out-dir", dir, "Directory for NNNNNN.pgm frames")->required();
  hist->add_option("--width", width, "Frame width (multiple of 3)");
  hist->add_option("--events", per_frame, "Events per frame");
  hist->add_flag("--no-filter", no_filter, "Skip the background activity filter");

  std::int64_t frames = 1000;
  std::uint64_t seed = 1;
  double visible = 0.5, dvs_fraction = 0.5;
  bool no_mirror = false;
  int exposure = 1;
  auto* synth = app.add_subcommand("synth-data", "Render a labelled synthetic dataset");
  synth->add_option("--out", dir, "Output directory")->required();
  synth->add_option("--frames", frames, "Base frames before augmentation");
  synth->add_option("--seed", seed, "Seed");
  synth->add_option("--width", width, "Frame width (multiple of 3)");
  synth->add_option("--visible-fraction", visible, "Fraction of frames with the prey in view");
  synth->add_option("--dvs-fraction", dvs_fraction, "Fraction of DVS histogram frames");
  synth->add_flag("--no-mirror", no_mirror, "Skip mirror augmentation");
  synth->add_option("--exposure-copies", exposure, "Exposure-shifted copies per APS frame");

  TrainOptions topt;
  auto* train = app.add_subcommand("train", "Train the network");
  train->add_option("--data", topt.data, "Dataset directory (manifest.json)");
  train->add_option("--synth", topt.synth, "Generate this many base frames instead of --data");
  train->add_option("--test", topt.test, "Held-out dataset directory to evaluate after training");
  train->add_option("--out", topt.out, "Weights file");
  train->add_option("--epochs", topt.cfg.epochs, "Epochs");
  train->add_option("--lr", topt.cfg.learning_rate, "Learning rate");
  train->add_option("--momentum", topt.cfg.momentum, "Momentum");
  train->add_option("--clip", topt.cfg.clip_norm, "Clip batch gradients to this global L2 norm (0 disables)");
  train->add_option("--batch", topt.cfg.batch_size, "Mini-batch size");
  train->add_option("--seed", topt.cfg.seed, "Initialization and shuffling seed");
  train->add_flag("--hard-targets", topt.hard_targets, "Train on one-hot labels instead of position targets");

  auto* infer = app.add_subcommand("infer", "Run the network on one frame");
  infer->add_option("--weights", weights, "Weights file")->required()->check(CLI::ExistingFile);
  infer->add_option("--frame", frame, "PGM frame")->required()->check(CLI::ExistingFile);
  infer->add_option("--kind", kind, "aps|dvs")->check(CLI::IsMember({"aps", "dvs"}));

  EpisodeOptions sim_opts;
  auto* simc = app.add_subcommand("sim", "Run a headless episode");
  sim_opts.add(simc, false);
  simc->add_option("--out", out, "Per-tick trace CSV");
  simc->add_option("--summary", summary, "Summary JSON");

  EpisodeOptions serve_opts;
  std::string address = "127.0.0.1", trace_out;
  unsigned short port = 8765;
  double seconds = 0.0;
  auto* serve = app.add_subcommand("serve", "Live simulation with a websocket state/teleop service");
  serve_opts.add(serve, true);
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--port", port, "Listen port (0 picks a free one)");
  serve->add_option("--seconds", seconds, "Stop after this many wall-clock seconds (0 = until interrupted)");
  serve->add_option("--trace", trace_out, "Write the per-tick trace CSV on exit");

  std::string net_spec = "default";
  int runs = 1000;
  double episode_seconds = 10.0;
  auto* bench = app.add_subcommand("bench", "Latency and throughput benchmarks");
  bench->add_option("--net", net_spec, "'default' or a weights file");
  bench->add_option("--runs", runs, "Forward passes");
  bench->add_option("--episode-seconds", episode_seconds, "Episode length for the frame-rate histogram (0 skips)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*filter) return cmd_filter(in, out, dt_max, radius);
    if (*hist) return cmd_hist(in, dir, width, per_frame, !no_filter);
    if (*synth) return cmd_synth(dir, frames, seed, width, visible, dvs_fraction, no_mirror, exposure);
    if (*train) return cmd_train(topt);
    if (*infer) return cmd_infer(weights, frame, kind);
    if (*simc) return cmd_sim(sim_opts, out, summary);
    if (*serve) {
      serve_opts.prey = "script";
      return cmd_serve(serve_opts, address, port, seconds, trace_out);
    }
    if (*bench) return cmd_bench(net_spec, runs, episode_seconds);
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDiverged;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n%s", e.what(), app.help().c_str());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  }
  return kUsage;
}

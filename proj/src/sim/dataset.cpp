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

#include "pursuit/sim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pursuit/error.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/events/histogram.hpp"
#include "pursuit/steering/position.hpp"

namespace pursuit::sim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

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

bool inside(const Arena& arena, const RobotState& r)
{
  for (const auto& c : footprint(r.pose, r.length, r.width)) {
    if (!arena.contains(c)) return false;
  }
  return true;
}

double wall_distance(const Arena& arena, Vec2 origin, double heading)
{
  const Vec2 dir{std::cos(heading), std::sin(heading)};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : arena.walls()) {
    if (auto t = ray_segment(origin, dir, s)) best = std::min(best, *t);
  }
  return best;
}

// Places predator and prey so that the prey sits at a drawn bearing and
// distance (visible) or outside the field of view (not visible).
World random_scene(const DatasetConfig& config, bool visible, std::mt19937_64& rng)
{
  World w;
  const Arena& a = w.arena;
  const double half_fov = config.camera.fov_deg / 2.0;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    w.predator.pose = {uniform(rng, 0.6, a.width - 0.6), uniform(rng, 0.6, a.height - 0.6),
                       uniform(rng, -std::numbers::pi, std::numbers::pi)};
    double beta;
    if (visible) {
      beta = uniform(rng, -half_fov, half_fov);
    } else {
      beta = uniform(rng, half_fov + 4.0, 180.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    }
    const double heading = w.predator.pose.theta - beta * kDeg;
    const double d_max = std::min(config.max_distance, wall_distance(a, w.predator.pose.position(), heading) - 0.5);
    if (d_max < config.min_distance) continue;
    const double d = uniform(rng, config.min_distance, d_max);
    w.prey.pose = {w.predator.pose.x + d * std::cos(heading), w.predator.pose.y + d * std::sin(heading),
                   uniform(rng, -std::numbers::pi, std::numbers::pi)};
    if (inside(a, w.prey) && inside(a, w.predator)) return w;
  }
  throw Error("could not place robots in the arena");
}

}  // namespace

void DatasetConfig::validate() const
{
  events::validate_frame_width(width);
  if (visible_fraction < 0.0 || visible_fraction > 1.0) throw ConfigError("visible fraction must be in [0,1]");
  if (dvs_fraction < 0.0 || dvs_fraction > 1.0) throw ConfigError("DVS fraction must be in [0,1]");
  if (exposure_copies < 0) throw ConfigError("exposure copies must be non-negative");
  if (exposure_copies > 0 && exposure_deltas.empty()) throw ConfigError("no exposure deltas to draw from");
  if (!(min_distance > 0.0 && min_distance < max_distance)) throw ConfigError("need 0 < min_distance < max_distance");
  dvs.validate();
}

std::string to_string(Augmentation a)
{
  switch (a) {
    case Augmentation::None: return "none";
    case Augmentation::Mirror: return "mirror";
    case Augmentation::Exposure: return "exposure";
    case Augmentation::MirrorExposure: return "mirror+exposure";
  }
  return "?";
}

std::array<std::int64_t, kNumClasses> Dataset::class_counts() const
{
  std::array<std::int64_t, kNumClasses> c{};
  for (const auto& s : samples) ++c[s.label.class_index()];
  return c;
}

SizeThresholds thresholds_from_widths(const std::vector<double>& widths)
{
  if (widths.empty()) return {};
  double mean = 0.0;
  for (double w : widths) mean += w;
  mean /= static_cast<double>(widths.size());
  double var = 0.0;
  for (double w : widths) var += (w - mean) * (w - mean);
  const double sd = std::sqrt(var / static_cast<double>(widths.size()));
  return {mean - sd, mean + sd};
}

ClassOutputs soft_target(const Sample& s)
{
  if (s.label.region == Region::N || !s.label.size) return ClassOutputs::one_hot(9);
  return steering::encode_position(s.bearing, *s.label.size);
}

Dataset make_dataset(const DatasetConfig& config, std::int64_t n_frames)
{
  config.validate();
  if (n_frames < 1) throw ConfigError("dataset needs at least one frame");
  const SceneRenderer renderer(Arena{}, config.camera);

  struct Base
  {
    events::Frame frame;
    GroundTruth truth;
  };
  std::vector<Base> base;
  base.reserve(static_cast<std::size_t>(n_frames));
  events::GrayImage image;

  for (std::int64_t i = 0; i < n_frames; ++i) {
    std::mt19937_64 rng(mix(config.seed, static_cast<std::uint64_t>(i)));
    const bool dvs = uniform(rng, 0.0, 1.0) < config.dvs_fraction;
    const bool visible = uniform(rng, 0.0, 1.0) < config.visible_fraction;
    const SizeThresholds placeholder{};
    for (;;) {
      World world = random_scene(config, visible, rng);
      if (!dvs) {
        auto f = render_aps(renderer, world, config.width, placeholder);
        base.push_back({std::move(f.frame), f.truth});
        break;
      }
      // Short motion burst until one histogram completes.
      world.predator.v = uniform(rng, 0.2, 1.5);
      world.predator.w = uniform(rng, -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
      world.prey.v = uniform(rng, 0.0, 1.0);
      world.prey.w = uniform(rng, -1.0, 1.0);
      DvsSynthesizer synth(config.dvs, rng());
      events::BackgroundActivityFilter filter;
      events::HistogramAccumulator hist({config.width, config.events_per_frame, 16});
      renderer.render(world, image);
      synth.reset(image);
      std::optional<events::CountGrid> grid;
      std::int64_t t = 0;
      for (int k = 0; k < 250 && !grid; ++k) {
        step(world, static_cast<double>(config.camera_interval_us) * 1e-6);
        renderer.render(world, image);
        const auto evs = synth.synthesize(image, t, t + config.camera_interval_us);
        t += config.camera_interval_us;
        for (const auto& e : evs) {
          const auto passed = config.use_filter ? filter.step(e) : std::optional<events::Event>(e);
          if (passed && (grid = hist.accumulate(*passed))) break;
        }
      }
      if (!grid) continue;
      base.push_back({events::normalize_histogram(*grid), ground_truth(world, config.width, placeholder, config.camera)});
      break;
    }
  }

  Dataset data;
  data.width = config.width;
  data.seed = config.seed;
  if (config.thresholds) {
    data.thresholds = *config.thresholds;
  } else {
    std::vector<double> widths;
    for (const auto& b : base) {
      if (b.truth.visible) widths.push_back(b.truth.width_px);
    }
    data.thresholds = thresholds_from_widths(widths);
  }

  std::mt19937_64 aug_rng(mix(config.seed, 0xa5a5));
  const auto relabel = [&](const GroundTruth& g) {
    if (!g.visible) return Label{Region::N, std::nullopt};
    Size size = Size::M;
    if (g.width_px < data.thresholds.low) size = Size::S;
    else if (g.width_px > data.thresholds.high) size = Size::XL;
    return Label{g.label.region, size};
  };
  for (std::size_t i = 0; i < base.size(); ++i) {
    Sample s;
    s.frame = std::move(base[i].frame);
    s.label = relabel(base[i].truth);
    s.visible = base[i].truth.visible;
    s.bearing = base[i].truth.bearing_deg;
    s.distance = base[i].truth.distance;
    s.width_px = base[i].truth.width_px;
    s.source = static_cast<std::int64_t>(i);

    std::vector<Sample> group{s};
    if (config.mirror) {
      Sample m = s;
      auto [frame, label] = events::mirror(s.frame, s.label);
      m.frame = std::move(frame);
      m.label = *label;
      m.bearing = -s.bearing;
      m.augmentation = Augmentation::Mirror;
      group.push_back(std::move(m));
    }
    if (s.frame.kind == events::FrameKind::Aps) {
      const std::size_t originals = group.size();
      for (std::size_t g = 0; g < originals; ++g) {
        for (int c = 0; c < config.exposure_copies; ++c) {
          const double delta = config.exposure_deltas[std::uniform_int_distribution<std::size_t>(
              0, config.exposure_deltas.size() - 1)(aug_rng)];
          Sample e = group[g];
          e.frame = events::augment_exposure(group[g].frame, delta);
          e.augmentation = group[g].augmentation == Augmentation::Mirror ? Augmentation::MirrorExposure
                                                                          : Augmentation::Exposure;
          group.push_back(std::move(e));
        }
      }
    }
    for (auto& g : group) data.samples.push_back(std::move(g));
  }
  return data;
}

std::string class_balance_report(const Dataset& data)
{
  const auto counts = data.class_counts();
  std::ostringstream out;
  const double total = static_cast<double>(data.samples.size());
  for (int k = 0; k < kNumClasses; ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-5s %8lld  %5.1f%%\n", to_string(Label::from_class(k)).c_str(),
                  static_cast<long long>(counts[k]), total > 0 ? 100.0 * counts[k] / total : 0.0);
    out << buf;
  }
  return out.str();
}

void save_dataset(const Dataset& data, const std::filesystem::path& dir)
{
  namespace fs = std::filesystem;
  fs::create_directories(dir / "frames");
  nlohmann::json manifest;
  manifest["width"] = data.width;
  manifest["seed"] = data.seed;
  manifest["thresholds"] = {{"low", data.thresholds.low}, {"high", data.thresholds.high}};
  const auto counts = data.class_counts();
  nlohmann::json balance;
  for (int k = 0; k < kNumClasses; ++k) balance[to_string(Label::from_class(k))] = counts[k];
  manifest["class_counts"] = balance;
  auto& list = manifest["samples"] = nlohmann::json::array();
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const Sample& s = data.samples[i];
    char name[32];
    std::snprintf(name, sizeof name, "frames/%06zu.pgm", i);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << events::encode_pgm(s.frame);
    list.push_back({{"file", name},
                    {"label", to_string(s.label)},
                    {"class", s.label.class_index()},
                    {"kind", std::string(events::to_string(s.frame.kind))},
                    {"visible", s.visible},
                    {"bearing_deg", s.bearing},
                    {"distance_m", s.distance},
                    {"width_px", s.width_px},
                    {"augmentation", to_string(s.augmentation)},
                    {"source", s.source}});
  }
  std::ofstream m(dir / "manifest.json");
  if (!m) throw Error("cannot write manifest in " + dir.string());
  m << manifest.dump(1) << '\n';
}

Dataset load_dataset(const std::filesystem::path& dir)
{
  std::ifstream m(dir / "manifest.json");
  if (!m) throw Error("cannot read " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    m >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what(), 0);
  }
  Dataset data;
  data.width = manifest.at("width").get<int>();
  data.seed = manifest.value("seed", std::uint64_t{0});
  data.thresholds = {manifest.at("thresholds").at("low").get<double>(),
                     manifest.at("thresholds").at("high").get<double>()};
  for (const auto& item : manifest.at("samples")) {
    const auto path = dir / item.at("file").get<std::string>();
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto kind = item.at("kind").get<std::string>() == "DVS" ? events::FrameKind::Dvs : events::FrameKind::Aps;
    Sample s;
    s.frame = events::frame_from_pgm(bytes, kind);
    if (s.frame.width != data.width) throw ShapeError(path.string() + " does not match the manifest width");
    s.label = Label::from_class(item.at("class").get<int>());
    s.visible = item.value("visible", s.label.region != Region::N);
    s.bearing = item.value("bearing_deg", 0.0);
    s.distance = item.value("distance_m", 0.0);
    s.width_px = item.value("width_px", 0.0);
    const auto aug = item.value("augmentation", std::string("none"));
    s.augmentation = aug == "mirror" ? Augmentation::Mirror
                     : aug == "exposure" ? Augmentation::Exposure
                     : aug == "mirror+exposure" ? Augmentation::MirrorExposure
                                                : Augmentation::None;
    s.source = item.value("source", std::int64_t{0});
    data.samples.push_back(std::move(s));
  }
  return data;
}

}  // namespace pursuit::sim

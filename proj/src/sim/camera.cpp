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

#include "pursuit/sim/camera.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "pursuit/steering/position.hpp"

namespace pursuit::sim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr int kNoiseSize = 256;

std::uint64_t splitmix(std::uint64_t& s)
{
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

double apparent_width_px(double distance, int width, const CameraConfig& camera)
{
  if (!(distance > 0.0)) return static_cast<double>(width);
  return width * (2.0 * std::atan(camera.prey_half_width / distance) / kDeg) / camera.fov_deg;
}

GroundTruth ground_truth(const World& world, int width, const SizeThresholds& thresholds, const CameraConfig& camera)
{
  GroundTruth g;
  const Pose& cam = world.predator.pose;
  const Vec2 d = world.prey.pose.position() - cam.position();
  g.distance = d.norm();
  g.bearing_deg = -wrap_angle(std::atan2(d.y, d.x) - cam.theta) / kDeg;
  g.width_px = apparent_width_px(g.distance, width, camera);
  const double half_fov = camera.fov_deg / 2.0;
  g.visible = std::abs(g.bearing_deg) <= half_fov && g.width_px >= camera.min_visible_px;
  if (!g.visible) {
    g.label = Label{Region::N, std::nullopt};
    return g;
  }
  const double col = width / 2.0 + g.bearing_deg * width / camera.fov_deg;
  const int third = std::clamp(static_cast<int>(std::floor(col / (width / 3.0))), 0, 2);
  const Region region = third == 0 ? Region::L : (third == 1 ? Region::C : Region::R);
  Size size = Size::M;
  if (g.width_px < thresholds.low) size = Size::S;
  else if (g.width_px > thresholds.high) size = Size::XL;
  g.label = Label{region, size};
  return g;
}

SceneRenderer::SceneRenderer(const Arena& arena, CameraConfig camera) : arena_(arena), camera_(camera)
{
  walls_ = arena_.walls();
  walls_.insert(walls_.end(), arena_.clutter.begin(), arena_.clutter.end());
  double u = 0.0;
  for (const auto& w : walls_) {
    wall_offset_.push_back(u);
    u += (w.b - w.a).norm() + 1.0;
  }
  noise_.resize(kNoiseSize * kNoiseSize);
  std::uint64_t s = camera_.texture_seed;
  for (auto& v : noise_) v = static_cast<double>(splitmix(s) >> 11) * 0x1.0p-53;

  const auto fill = [](Table& t, double x0, double x1, double y0, double y1, double step, auto&& f) {
    t.x0 = x0;
    t.y0 = y0;
    t.inv_step = 1.0 / step;
    t.nx = static_cast<int>(std::ceil((x1 - x0) / step)) + 1;
    t.ny = static_cast<int>(std::ceil((y1 - y0) / step)) + 1;
    t.v.resize(static_cast<std::size_t>(t.nx) * t.ny);
    for (int j = 0; j < t.ny; ++j) {
      for (int i = 0; i < t.nx; ++i) t.v[static_cast<std::size_t>(j) * t.nx + i] = static_cast<float>(f(x0 + i * step, y0 + j * step));
    }
  };
  fill(wall_table_, 0.0, u, 0.0, camera_.wall_height, 0.01, [&](double a, double b) { return wall_texture(a, b); });
  fill(floor_table_, -0.5, arena_.width + 0.5, -0.5, arena_.height + 0.5, 0.01,
       [&](double a, double b) { return floor_texture(a, b); });
  fill(sky_table_, -180.0, 180.0, -1.0, 45.0, 0.2,
       [&](double a, double b) { return background_texture(a * kDeg, b * kDeg); });
}

double SceneRenderer::Table::lookup(double x, double y) const
{
  const int i = std::clamp(static_cast<int>((x - x0) * inv_step + 0.5), 0, nx - 1);
  const int j = std::clamp(static_cast<int>((y - y0) * inv_step + 0.5), 0, ny - 1);
  return v[static_cast<std::size_t>(j) * nx + i];
}

namespace {

double value_noise(const std::vector<double>& lattice, double x, double y)
{
  const double fx = std::floor(x), fy = std::floor(y);
  const double tx = smooth(x - fx), ty = smooth(y - fy);
  const int ix = static_cast<int>(static_cast<long long>(fx) & (kNoiseSize - 1));
  const int iy = static_cast<int>(static_cast<long long>(fy) & (kNoiseSize - 1));
  const int jx = (ix + 1) & (kNoiseSize - 1), jy = (iy + 1) & (kNoiseSize - 1);
  const double a = lattice[iy * kNoiseSize + ix], b = lattice[iy * kNoiseSize + jx];
  const double c = lattice[jy * kNoiseSize + ix], d = lattice[jy * kNoiseSize + jx];
  return (a + (b - a) * tx) + ((c + (d - c) * tx) - (a + (b - a) * tx)) * ty;
}

}  // namespace

double SceneRenderer::wall_texture(double u, double z) const
{
  const double stripes = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * u / 0.45);
  const double n = value_noise(noise_, u / 0.15, z / 0.15 + 17.0);
  return std::clamp(0.35 + 0.3 * stripes * (z < 0.8 * camera_.wall_height ? 1.0 : 0.3) + 0.3 * n, 0.0, 1.0);
}

double SceneRenderer::floor_texture(double x, double y) const
{
  const double stripes = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (x + 0.3 * y) / 0.8);
  const double n = value_noise(noise_, x / 0.2 + 101.0, y / 0.2 + 53.0);
  return std::clamp(0.3 + 0.2 * stripes + 0.3 * n, 0.0, 1.0);
}

double SceneRenderer::background_texture(double azimuth, double elevation) const
{
  const double a = azimuth / kDeg, e = elevation / kDeg;
  return std::clamp(0.55 + 0.4 * value_noise(noise_, a / 4.0 + 200.0, e / 4.0 + 150.0), 0.0, 1.0);
}

events::GrayImage SceneRenderer::render(const World& world) const
{
  events::GrayImage out;
  render(world, out);
  return out;
}

void SceneRenderer::render(const World& world, events::GrayImage& out) const
{
  out.width = kSensorWidth;
  out.height = kSensorHeight;
  out.data.resize(static_cast<std::size_t>(kSensorWidth) * kSensorHeight);

  const Pose& cam = world.predator.pose;
  const Vec2 origin = cam.position();
  const double h = camera_.height;
  const double rad_per_px = camera_.fov_deg * kDeg / kSensorWidth;

  const Vec2 to_prey = world.prey.pose.position() - origin;
  const double prey_d = to_prey.norm();
  const double prey_rel = wrap_angle(std::atan2(to_prey.y, to_prey.x) - cam.theta);  // positive left
  const double prey_half = prey_d > 0.0 ? std::atan(camera_.prey_half_width / prey_d) : 0.0;
  const double prey_top = (world.prey.height - h) / std::max(prey_d, 1e-6);
  const double prey_bottom = -h / std::max(prey_d, 1e-6);
  const double wheel_top = (0.25 * world.prey.height - h) / std::max(prey_d, 1e-6);

  std::array<double, kSensorHeight> tan_e{};
  std::array<double, kSensorHeight> elev_deg{};
  for (int row = 0; row < kSensorHeight; ++row) {
    const double e = (kSensorHeight / 2.0 - (row + 0.5)) * rad_per_px;
    tan_e[row] = std::tan(e);
    elev_deg[row] = e / kDeg;
  }

  for (int col = 0; col < kSensorWidth; ++col) {
    const double rel = (kSensorWidth / 2.0 - (col + 0.5)) * rad_per_px;
    const double az = cam.theta + rel;
    const double az_deg = wrap_angle(az) / kDeg;
    const Vec2 dir{std::cos(az), std::sin(az)};
    double wall_d = std::numeric_limits<double>::infinity();
    double u = 0.0;
    for (std::size_t i = 0; i < walls_.size(); ++i) {
      double v = 0.0;
      if (auto t = ray_segment(origin, dir, walls_[i], &v); t && *t < wall_d) {
        wall_d = *t;
        u = wall_offset_[i] + v * (walls_[i].b - walls_[i].a).norm();
      }
    }
    wall_d = std::max(wall_d, 1e-3);
    const bool prey_col = prey_d > 0.0 && prey_d < wall_d && std::abs(wrap_angle(rel - prey_rel)) <= prey_half;

    for (int row = 0; row < kSensorHeight; ++row) {
      const double te = tan_e[row];
      double value;
      if (prey_col && te <= prey_top && te >= prey_bottom) {
        value = te < wheel_top ? 0.06 : 0.15;
      } else if (te < 0.0 && -h / te < wall_d) {
        const double g = -h / te;
        value = floor_table_.lookup(origin.x + dir.x * g, origin.y + dir.y * g);
      } else {
        const double z = h + wall_d * te;
        value = z <= camera_.wall_height ? wall_table_.lookup(u, z) : sky_table_.lookup(az_deg, elev_deg[row]);
      }
      out.data[static_cast<std::size_t>(row) * kSensorWidth + col] = value;
    }
  }
}

LabeledFrame render_aps(const SceneRenderer& renderer, const World& world, int width,
                        const SizeThresholds& thresholds, std::int64_t t_us)
{
  const auto raw = renderer.render(world);
  return {events::subsample_aps(raw, width, t_us), ground_truth(world, width, thresholds, renderer.camera())};
}

}  // namespace pursuit::sim

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
#include <vector>

#include "pursuit/events/frame.hpp"
#include "pursuit/label.hpp"
#include "pursuit/sim/world.hpp"

namespace pursuit::sim {

inline constexpr int kSensorWidth = 240;
inline constexpr int kSensorHeight = 180;

struct CameraConfig
{
  double fov_deg = 81.0;
  double height = 0.45;          // lens height above the floor, m
  double prey_half_width = 0.375;  // apparent half-width used for the angular size, m
  double wall_height = 1.2;
  double min_visible_px = 2.0;   // prey narrower than this (at the network width) is labelled N
  std::uint64_t texture_seed = 7;
};

// Apparent-size class boundaries in network pixels.
// Defaults are mean -/+ one standard deviation of the prey widths in a
// make_dataset(seed 1) run at width 36.
struct SizeThresholds
{
  double low = 5.5;    // below: S
  double high = 16.7;  // above: XL
};

struct GroundTruth
{
  bool visible = false;
  double bearing_deg = 0.0;  // signed, positive to the right of the optical axis
  double distance = 0.0;     // camera to prey centre, m
  double width_px = 0.0;     // apparent width at the network input width
  Label label;
};

// Apparent prey width in pixels for an image `width` pixels wide.
double apparent_width_px(double distance, int width, const CameraConfig& camera = {});

// Label from geometry: N outside the field of view or below the visibility
// width, else region by the image third containing the prey centre column
// and size by the thresholds.
GroundTruth ground_truth(const World& world, int width, const SizeThresholds& thresholds,
                         const CameraConfig& camera = {});

// Equidistant projection renderer for the predator's camera. Textures are
// fixed at construction; rendering has no temporal noise.
class SceneRenderer
{
public:
  explicit SceneRenderer(const Arena& arena, CameraConfig camera = {});

  // 240x180 linear-intensity readout in [0,1].
  events::GrayImage render(const World& world) const;
  void render(const World& world, events::GrayImage& out) const;

  const CameraConfig& camera() const { return camera_; }
  const Arena& arena() const { return arena_; }

private:
  double wall_texture(double u, double z) const;
  double floor_texture(double x, double y) const;
  double background_texture(double azimuth, double elevation) const;

  Arena arena_;
  CameraConfig camera_;
  std::vector<Segment> walls_;
  std::vector<double> wall_offset_;  // perimeter coordinate at each wall start
  std::vector<double> noise_;        // lattice of uniform values

  // Textures sampled on fixed grids at construction.
  struct Table
  {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0, y0 = 0.0;
    double inv_step = 1.0;
    std::vector<float> v;
    double lookup(double x, double y) const;
  };
  Table wall_table_;
  Table floor_table_;
  Table sky_table_;
};

// APS frame at the network width plus its label.
struct LabeledFrame
{
  events::Frame frame;
  GroundTruth truth;
};
LabeledFrame render_aps(const SceneRenderer& renderer, const World& world, int width,
                        const SizeThresholds& thresholds, std::int64_t t_us = 0);

}  // namespace pursuit::sim

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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pursuit/class_outputs.hpp"
#include "pursuit/events/frame.hpp"
#include "pursuit/label.hpp"
#include "pursuit/sim/camera.hpp"
#include "pursuit/sim/dvs.hpp"

namespace pursuit::sim {

struct DatasetConfig
{
  int width = 36;
  std::uint64_t seed = 1;
  double visible_fraction = 0.5;
  double dvs_fraction = 0.5;
  bool mirror = true;
  int exposure_copies = 1;        // extra exposure-shifted copies per APS frame
  std::vector<double> exposure_deltas{-0.3, -0.15, 0.15, 0.3};  // each copy draws one
  double min_distance = 0.8;      // camera to prey centre, m
  double max_distance = 7.5;
  std::optional<SizeThresholds> thresholds;  // derived from the data when absent
  CameraConfig camera;
  DvsConfig dvs{0.15, 0.01, 1000.0};
  bool use_filter = true;
  int events_per_frame = 5000;
  std::int64_t camera_interval_us = 4000;
  void validate() const;
};

enum class Augmentation { None, Mirror, Exposure, MirrorExposure };
std::string to_string(Augmentation a);

struct Sample
{
  events::Frame frame;
  Label label;
  bool visible = false;
  double bearing = 0.0;   // degrees, positive right
  double distance = 0.0;  // m
  double width_px = 0.0;
  Augmentation augmentation = Augmentation::None;
  std::int64_t source = 0;  // index of the base sample
};

struct Dataset
{
  int width = 36;
  std::uint64_t seed = 1;
  SizeThresholds thresholds;
  std::vector<Sample> samples;

  std::array<std::int64_t, kNumClasses> class_counts() const;
};

// `n_frames` base samples (before augmentation): randomized poses rendered
// as APS frames, or as DVS histograms from short motion bursts. Labels use
// size thresholds at mean +/- 1 sigma of the visible widths unless fixed in
// the config. Deterministic in the seed.
Dataset make_dataset(const DatasetConfig& config, std::int64_t n_frames);

// Mean +/- one standard deviation of the widths.
SizeThresholds thresholds_from_widths(const std::vector<double>& widths);

// Training target: ideal soft outputs for the true bearing and size, or
// one-hot N.
ClassOutputs soft_target(const Sample& s);

// Writes frames/NNNNNN.pgm and manifest.json under `dir`.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);
std::string class_balance_report(const Dataset& data);

}  // namespace pursuit::sim

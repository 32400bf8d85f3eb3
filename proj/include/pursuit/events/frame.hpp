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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pursuit/label.hpp"

namespace pursuit::events {

enum class FrameKind { Aps, Dvs };

inline std::string_view to_string(FrameKind k) { return k == FrameKind::Aps ? "APS" : "DVS"; }

// Row-major gray image with values in [0,1]. Used for full-resolution
// sensor readouts and renderer output.
struct GrayImage
{
  int width = 0;
  int height = 0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Square network input. Width must be a multiple of 3 so the image splits
// into three equal steering regions.
struct Frame
{
  int width = 0;
  std::vector<double> pixels;
  FrameKind kind = FrameKind::Aps;
  std::int64_t t = 0;

  Frame() = default;
  Frame(int w, FrameKind k, std::int64_t t_us = 0, double fill = 0.5);

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

void validate_frame_width(int width);

// Anisotropic block mean of a 240x180 readout down to width x width.
Frame subsample_aps(const GrayImage& raw, int width, std::int64_t t = 0);

// APS-only. Shifts gray values by `delta` and clips to [0,1].
Frame augment_exposure(const Frame& f, double delta);

// Horizontal flip; swaps L and R in the label.
std::pair<Frame, std::optional<Label>> mirror(const Frame& f, std::optional<Label> label = std::nullopt);

// Binary PGM (P5, maxval 255).
std::string encode_pgm(const GrayImage& image);
std::string encode_pgm(const Frame& frame);
// Accepts P5 and P2 with maxval up to 65535.
GrayImage decode_pgm(std::string_view bytes);
Frame frame_from_pgm(std::string_view bytes, FrameKind kind = FrameKind::Aps);

}  // namespace pursuit::events

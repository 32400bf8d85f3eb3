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

#include "pursuit/events/frame.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pursuit/error.hpp"
#include "pursuit/events/event.hpp"

namespace pursuit::events {

void validate_frame_width(int width)
{
  if (width <= 0 || width % 3 != 0) {
    throw ShapeError("frame width " + std::to_string(width) + " is not a positive multiple of 3");
  }
}

Frame::Frame(int w, FrameKind k, std::int64_t t_us, double fill)
  : width(w), pixels(static_cast<std::size_t>(w) * w, fill), kind(k), t(t_us)
{
  validate_frame_width(w);
}

Frame subsample_aps(const GrayImage& raw, int width, std::int64_t t)
{
  if (raw.width != kSensorWidth || raw.height != kSensorHeight ||
      raw.data.size() != static_cast<std::size_t>(kSensorWidth) * kSensorHeight) {
    throw ShapeError("APS readout must be 240x180, got " + std::to_string(raw.width) + "x" +
                     std::to_string(raw.height));
  }
  Frame out(width, FrameKind::Aps, t, 0.0);
  std::vector<int> counts(out.pixels.size(), 0);
  for (int y = 0; y < kSensorHeight; ++y) {
    const int ty = y * width / kSensorHeight;
    for (int x = 0; x < kSensorWidth; ++x) {
      const int tx = x * width / kSensorWidth;
      const auto idx = static_cast<std::size_t>(ty) * width + tx;
      out.pixels[idx] += raw.at(x, y);
      ++counts[idx];
    }
  }
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] /= counts[i];
  }
  return out;
}

Frame augment_exposure(const Frame& f, double delta)
{
  if (f.kind != FrameKind::Aps) throw Error("exposure augmentation applies to APS frames only");
  Frame out = f;
  for (auto& p : out.pixels) p = std::clamp(p + delta, 0.0, 1.0);
  return out;
}

std::pair<Frame, std::optional<Label>> mirror(const Frame& f, std::optional<Label> label)
{
  Frame out = f;
  for (int y = 0; y < f.width; ++y) {
    for (int x = 0; x < f.width; ++x) {
      out.at(x, y) = f.at(f.width - 1 - x, y);
    }
  }
  if (label) label = label->mirrored();
  return {std::move(out), label};
}

std::string encode_pgm(const GrayImage& image)
{
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.data.size());
  for (double p : image.data) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0))));
  }
  return out;
}

std::string encode_pgm(const Frame& frame)
{
  GrayImage img;
  img.width = img.height = frame.width;
  img.data = frame.pixels;
  return encode_pgm(img);
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::string_view bytes, std::size_t& pos)
{
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw ParseError("truncated PGM header", start);
  return std::string(bytes.substr(start, pos - start));
}

int header_int(std::string_view bytes, std::size_t& pos)
{
  const std::size_t at = pos;
  const std::string tok = next_token(bytes, pos);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw ParseError("bad PGM header value '" + tok + "'", at);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad PGM header value '" + tok + "'", at);
  }
}

}  // namespace

GrayImage decode_pgm(std::string_view bytes)
{
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  if (magic != "P5" && magic != "P2") throw ParseError("not a PGM file", 0);
  const int w = header_int(bytes, pos);
  const int h = header_int(bytes, pos);
  const int maxval = header_int(bytes, pos);
  if (maxval > 65535) throw ParseError("PGM maxval too large", pos);
  GrayImage img(w, h);
  const std::size_t n = img.data.size();
  if (magic == "P5") {
    ++pos;  // single whitespace after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + n * bpp) throw ParseError("truncated PGM raster", pos);
    for (std::size_t i = 0; i < n; ++i) {
      unsigned v = static_cast<unsigned char>(bytes[pos + i * bpp]);
      if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i * bpp + 1]);
      img.data[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = std::stoi(next_token(bytes, pos));
      img.data[i] = std::clamp(static_cast<double>(v) / maxval, 0.0, 1.0);
    }
  }
  return img;
}

Frame frame_from_pgm(std::string_view bytes, FrameKind kind)
{
  GrayImage img = decode_pgm(bytes);
  if (img.width != img.height) throw ShapeError("network frames must be square");
  Frame f(img.width, kind, 0, 0.0);
  f.pixels = std::move(img.data);
  return f;
}

}  // namespace pursuit::events

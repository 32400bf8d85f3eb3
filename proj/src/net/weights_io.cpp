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

#include "pursuit/net/weights_io.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <vector>

#include "pursuit/error.hpp"
#include "pursuit/net/layers.hpp"

namespace pursuit::net {

namespace {

void append_number(std::string& out, double v)
{
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

struct Tokenizer
{
  std::string_view text;
  std::size_t pos = 0;

  std::string_view next()
  {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }
  std::string_view peek()
  {
    const std::size_t saved = pos;
    auto t = next();
    pos = saved;
    return t;
  }
};

struct RawLayer
{
  std::string name;
  std::string kind;
  std::vector<int> dims;
  std::vector<double> values;
};

std::vector<RawLayer> parse(std::string_view text)
{
  std::string_view header = text.substr(0, text.find('\n'));
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != kWeightsMagic) throw ParseError("weight file header must be 'PREYNET v1'", 0);
  Tokenizer tok{text, kWeightsMagic.size()};
  std::vector<RawLayer> layers;
  while (true) {
    const auto t = tok.next();
    if (t.empty()) break;
    if (t != "layer") throw ParseError("expected 'layer', found '" + std::string(t) + "'", tok.pos - t.size());
    RawLayer l;
    l.name = std::string(tok.next());
    l.kind = std::string(tok.next());
    if (l.name.empty() || l.kind.empty()) throw ParseError("truncated layer line", tok.pos);
    // Dims are the integer tokens up to the end of the line.
    while (tok.pos < text.size() && text[tok.pos] != '\n') {
      const auto d = tok.next();
      if (d.empty()) break;
      int v = 0;
      auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), v);
      if (ec != std::errc{} || p != d.data() + d.size() || v <= 0) {
        throw ParseError("layer '" + l.name + "': bad dimension '" + std::string(d) + "'", tok.pos - d.size());
      }
      l.dims.push_back(v);
      while (tok.pos < text.size() && (text[tok.pos] == ' ' || text[tok.pos] == '\t' || text[tok.pos] == '\r')) {
        ++tok.pos;
      }
    }
    while (!tok.peek().empty() && tok.peek() != "layer") {
      const auto v = tok.next();
      double x = 0.0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ParseError("layer '" + l.name + "': bad value '" + std::string(v) + "'", tok.pos - v.size());
      }
      l.values.push_back(x);
    }
    layers.push_back(std::move(l));
  }
  return layers;
}

int infer_width(int conv2_maps, int flat)
{
  for (int w = 3; w <= 3000; w += 3) {
    const int p = w / 2 / 2;
    if (conv2_maps * p * p == flat) return w;
    if (conv2_maps * p * p > flat) break;
  }
  throw ShapeError("layer 'fc1': input size " + std::to_string(flat) + " matches no input width");
}

}  // namespace

std::string save_weights(const Network& net)
{
  std::string out(kWeightsMagic);
  out.push_back('\n');
  for (const auto& l : net.layers()) {
    if (!l.has_parameters()) continue;
    out += "layer " + l.name + " " + std::string(to_string(l.kind));
    if (l.kind == LayerKind::Conv) {
      out += " " + std::to_string(l.out) + " " + std::to_string(l.in) + " 5 5\n";
    } else {
      out += " " + std::to_string(l.out) + " " + std::to_string(l.in) + "\n";
    }
    const std::size_t row = l.weights.size() / l.out;
    for (std::size_t i = 0; i < l.weights.size(); ++i) {
      append_number(out, l.weights[i]);
      out.push_back((i + 1) % row == 0 ? '\n' : ' ');
    }
    for (std::size_t i = 0; i < l.biases.size(); ++i) {
      append_number(out, l.biases[i]);
      out.push_back(i + 1 == l.biases.size() ? '\n' : ' ');
    }
  }
  return out;
}

Network load_weights(std::string_view text, int input_width)
{
  if (text.empty()) throw ParseError("empty weight file: missing 'PREYNET v1' header", 0);
  const auto raw = parse(text);

  static const std::array<std::pair<const char*, const char*>, 4> expected{
      {{"conv1", "conv"}, {"conv2", "conv"}, {"fc1", "fc"}, {"fc2", "fc"}}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= raw.size()) {
      throw ShapeError(std::string("weight file ends before layer '") + expected[i].first + "'");
    }
    if (raw[i].name != expected[i].first || raw[i].kind != expected[i].second) {
      throw ShapeError("layer '" + raw[i].name + "' (" + raw[i].kind + ") found where '" + expected[i].first +
                       "' (" + expected[i].second + ") was expected");
    }
    const std::size_t want_dims = raw[i].kind == "conv" ? 4 : 2;
    if (raw[i].dims.size() != want_dims) throw ShapeError("layer '" + raw[i].name + "': wrong number of dimensions");
    if (raw[i].kind == "conv" && (raw[i].dims[2] != kKernelSize || raw[i].dims[3] != kKernelSize)) {
      throw ShapeError("layer '" + raw[i].name + "': kernels must be 5x5");
    }
  }
  if (raw.size() > expected.size()) throw ShapeError("unexpected layer '" + raw[expected.size()].name + "'");

  Architecture arch;
  arch.conv1_maps = raw[0].dims[0];
  arch.conv2_maps = raw[1].dims[0];
  arch.fc_units = raw[2].dims[0];
  arch.classes = raw[3].dims[0];
  if (raw[0].dims[1] != 1) throw ShapeError("layer 'conv1': input must have one channel");
  if (raw[1].dims[1] != arch.conv1_maps) throw ShapeError("layer 'conv2': depth does not match conv1 maps");
  if (raw[3].dims[1] != arch.fc_units) throw ShapeError("layer 'fc2': input does not match fc1 units");
  arch.input_width = input_width > 0 ? input_width : infer_width(arch.conv2_maps, raw[2].dims[1]);
  if (raw[2].dims[1] != arch.flat_size()) {
    throw ShapeError("layer 'fc1': input size " + std::to_string(raw[2].dims[1]) + " does not match " +
                     std::to_string(arch.flat_size()) + " for a " + std::to_string(arch.input_width) + " input");
  }

  Network net = Network::zeros(arch);
  std::size_t r = 0;
  for (auto& l : net.layers()) {
    if (!l.has_parameters()) continue;
    const auto& src = raw[r++];
    const std::size_t need = l.weights.size() + l.biases.size();
    if (src.values.size() != need) {
      throw ShapeError("layer '" + src.name + "': expected " + std::to_string(need) + " values, found " +
                       std::to_string(src.values.size()));
    }
    std::copy(src.values.begin(), src.values.begin() + static_cast<long>(l.weights.size()), l.weights.begin());
    std::copy(src.values.begin() + static_cast<long>(l.weights.size()), src.values.end(), l.biases.begin());
  }
  return net;
}

}  // namespace pursuit::net

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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "pursuit/error.hpp"
#include "pursuit/events/background_filter.hpp"
#include "pursuit/events/event.hpp"
#include "pursuit/events/frame.hpp"
#include "pursuit/events/histogram.hpp"

using namespace pursuit;
using namespace pursuit::events;

namespace {

Event ev(std::int64_t t, int x, int y, Polarity p = Polarity::On)
{
  return {t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), p};
}

std::vector<Event> poisson_noise(double rate, std::int64_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(rate);
  std::uniform_int_distribution<int> px(0, kSensorWidth - 1), py(0, kSensorHeight - 1), pol(0, 1);
  std::vector<Event> out;
  out.reserve(static_cast<std::size_t>(n));
  double t = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    t += gap(rng);
    out.push_back(ev(static_cast<std::int64_t>(t * 1e6), px(rng), py(rng), pol(rng) ? Polarity::On : Polarity::Off));
  }
  return out;
}

}  // namespace

TEST_SUITE("event io")
{
  TEST_CASE("EVT1 and CSV round trip")
  {
    const std::vector<Event> in{ev(0, 0, 0), ev(5, 239, 179, Polarity::Off), ev(5, 17, 3), ev(1'000'000'000'000, 1, 2)};
    for (auto fmt : {EventFormat::Evt1, EventFormat::Csv}) {
      const auto bytes = encode_events(in, fmt);
      CHECK(detect_format(bytes) == fmt);
      CHECK(parse_events(bytes, fmt) == in);
    }
    CHECK(encode_events(in, EventFormat::Evt1).size() == kEvt1Magic.size() + in.size() * kEvt1RecordSize);
  }

  TEST_CASE("malformed streams are rejected")
  {
    CHECK_THROWS_AS(parse_events("EVT0\n", EventFormat::Evt1), ParseError);
    auto bytes = encode_events(std::vector<Event>{ev(1, 2, 3)}, EventFormat::Evt1);
    CHECK_THROWS_AS(parse_events(bytes.substr(0, bytes.size() - 1), EventFormat::Evt1), ParseError);
    CHECK_THROWS_AS(parse_events("t_us,x,y,polarity\n10,240,0,1\n", EventFormat::Csv), ParseError);
    CHECK_THROWS_AS(parse_events("t_us,x,y,polarity\n10,1,1,1\n9,1,1,1\n", EventFormat::Csv), OrderingError);
    CHECK_THROWS_AS(parse_events("10,1,1,1\n", EventFormat::Csv), ParseError);
  }
}

TEST_SUITE("background filter")
{
  TEST_CASE("neighbour support inside and outside the window")
  {
    BackgroundActivityFilter f({10'000, 1});
    CHECK_FALSE(f.step(ev(0, 50, 50)));  // no history
    CHECK(f.step(ev(5'000, 51, 51)));    // diagonal neighbour 5 ms earlier
    CHECK_FALSE(f.step(ev(25'000, 53, 51)));  // two columns away
    BackgroundActivityFilter g({10'000, 1});
    g.step(ev(0, 10, 10));
    CHECK_FALSE(g.step(ev(15'000, 10, 11)));  // window exceeded
  }

  TEST_CASE("rejected events still refresh their pixel")
  {
    BackgroundActivityFilter f;
    CHECK_FALSE(f.step(ev(100, 7, 7)));
    CHECK(f.last_timestamp(7, 7) == 100);
    CHECK(f.step(ev(200, 7, 8)));
  }

  TEST_CASE("invalid configuration")
  {
    CHECK_THROWS_AS(BackgroundActivityFilter({0, 1}), ConfigError);
    CHECK_THROWS_AS(BackgroundActivityFilter({10, 0}), ConfigError);
  }

  TEST_CASE("shorter windows never pass more events")
  {
    const auto stream = poisson_noise(200'000.0, 200'000, 3);
    std::vector<std::int64_t> windows{20'000, 10'000, 5'000, 1'000, 100};
    std::set<std::size_t> previous;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      BackgroundActivityFilter f({windows[w], 1});
      std::set<std::size_t> passed;
      for (std::size_t i = 0; i < stream.size(); ++i) {
        if (f.step(stream[i])) passed.insert(i);
      }
      if (w > 0) CHECK(std::includes(previous.begin(), previous.end(), passed.begin(), passed.end()));
      previous = std::move(passed);
    }
  }

  TEST_CASE("uniform noise at 1 keps passes well under 10%")
  {
    // An interior event passes iff one of the 9 pixels of its neighbourhood
    // fired in the preceding dt_max. For Poisson noise at rate R spread over
    // N pixels that probability is 1 - exp(-9 R dt / N); border pixels have
    // fewer neighbours, so this bounds the mean pass rate from above.
    const double rate = 1000.0, dt = 0.01;
    const double bound = 1.0 - std::exp(-9.0 * rate * dt / (kSensorWidth * kSensorHeight));
    const auto stream = poisson_noise(rate, 1'000'000, 11);
    BackgroundActivityFilter f({10'000, 1});
    std::int64_t passed = 0;
    for (const auto& e : stream) passed += f.step(e).has_value();
    const double frac = static_cast<double>(passed) / static_cast<double>(stream.size());
    // Binomial standard error at this size is about 4.6e-5.
    CHECK(frac <= bound + 3e-4);
    CHECK(frac > 0.5 * bound);
    CHECK(frac < 0.10);
  }
}

TEST_SUITE("histogram")
{
  TEST_CASE("corner mapping by truncated division")
  {
    HistogramAccumulator acc({36, 2, 16});
    CHECK_FALSE(acc.accumulate(ev(0, 0, 0)));
    const auto g = acc.accumulate(ev(1, 239, 179, Polarity::Off));
    REQUIRE(g);
    CHECK(g->at(0, 0) == 1);
    CHECK(g->at(35, 35) == -1);
    CHECK(g->t == 1);
    CHECK(acc.collected() == 0);
  }

  TEST_CASE("ON and OFF cancel")
  {
    HistogramAccumulator acc({36, 4, 16});
    acc.accumulate(ev(0, 100, 100));
    acc.accumulate(ev(1, 100, 100, Polarity::Off));
    acc.accumulate(ev(2, 101, 100, Polarity::Off));
    const auto g = acc.accumulate(ev(3, 101, 100));
    REQUIRE(g);
    for (int c : g->counts) CHECK(c == 0);
  }

  TEST_CASE("hot pixel saturates at the clip")
  {
    HistogramAccumulator acc({36, 6000, 16});
    std::optional<CountGrid> g;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> px(0, 239), py(0, 179);
    for (int i = 0; i < 6000; ++i) {
      // 500 ON events from the hot pixel, 5500 elsewhere in the other half
      g = i % 12 == 0 ? acc.accumulate(ev(i, 0, 0)) : acc.accumulate(ev(i, 120 + px(rng) / 2, py(rng)));
    }
    REQUIRE(g);
    CHECK(g->at(0, 0) == 16);
    for (int c : g->counts) CHECK(std::abs(c) <= 16);
  }

  TEST_CASE("one grid per n_target events")
  {
    const auto stream = poisson_noise(1e6, 23'456, 2);
    HistogramAccumulator acc({36, 5000, 16});
    int grids = 0;
    for (const auto& e : stream) {
      if (auto g = acc.accumulate(e)) {
        ++grids;
        long abs_sum = 0;
        for (int c : g->counts) abs_sum += std::abs(c);
        CHECK(abs_sum <= 5000);
      }
      CHECK(acc.collected() < 5000);
    }
    CHECK(grids == 23'456 / 5000);
    CHECK(acc.collected() == 23'456 % 5000);
  }

  TEST_CASE("normalization")
  {
    CountGrid g{36, std::vector<int>(36 * 36, 0), 0};
    auto f = normalize_histogram(g);
    for (double p : f.pixels) CHECK(p == 0.5);

    // Nonzero counts {9, 1 x 9}: RMS = sqrt((81 + 9) / 10) = 3, so 9 = 3 sigma.
    g.counts[0] = 9;
    for (int i = 1; i <= 9; ++i) g.counts[i] = 1;
    CHECK(histogram_sigma(g) == doctest::Approx(3.0).epsilon(1e-15));
    f = normalize_histogram(g);
    CHECK(f.kind == FrameKind::Dvs);
    CHECK(f.pixels[0] == doctest::Approx(1.0));
    CHECK(f.pixels[1] == doctest::Approx(0.5 + 1.0 / 18.0));
    CHECK(f.pixels[10] == 0.5);
  }

  TEST_CASE("negated counts reflect about 0.5")
  {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> c(-3, 3);
    CountGrid g{36, std::vector<int>(36 * 36), 0};
    for (int& v : g.counts) v = c(rng);
    CountGrid neg = g;
    for (int& v : neg.counts) v = -v;
    const auto a = normalize_histogram(g), b = normalize_histogram(neg);
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
      if (a.pixels[i] > 0.0 && a.pixels[i] < 1.0) CHECK(b.pixels[i] == doctest::Approx(1.0 - a.pixels[i]));
    }
  }

  TEST_CASE("mirrored stream gives mirrored frames")
  {
    // Exact when the width divides 240; at 36 the truncated-division bins
    // are not palindromic and edge columns can land one bin off.
    const auto stream = poisson_noise(1e6, 15'000, 4);
    HistogramAccumulator a({48, 5000, 16}), b({48, 5000, 16});
    for (const auto& e : stream) {
      auto m = e;
      m.x = static_cast<std::uint16_t>(kSensorWidth - 1 - e.x);
      auto ga = a.accumulate(e);
      auto gb = b.accumulate(m);
      REQUIRE(ga.has_value() == gb.has_value());
      if (ga) CHECK(mirror(normalize_histogram(*ga)).first.pixels == normalize_histogram(*gb).pixels);
    }
  }
}

TEST_SUITE("frames")
{
  TEST_CASE("width must divide into thirds")
  {
    CHECK_NOTHROW(validate_frame_width(36));
    CHECK_NOTHROW(validate_frame_width(54));
    CHECK_THROWS_AS(validate_frame_width(35), ShapeError);
    CHECK_THROWS_AS(validate_frame_width(0), ShapeError);
  }

  TEST_CASE("APS subsampling")
  {
    GrayImage flat(240, 180, 0.3);
    for (int w : {36, 54}) {
      const auto f = subsample_aps(flat, w);
      CHECK(f.width == w);
      for (double p : f.pixels) CHECK(p == doctest::Approx(0.3));
    }
    GrayImage halves(240, 180, 0.0);
    for (int y = 0; y < 180; ++y) {
      for (int x = 120; x < 240; ++x) halves.at(x, y) = 1.0;
    }
    const auto f = subsample_aps(halves, 36);
    for (int y = 0; y < 36; ++y) {
      for (int x = 0; x < 36; ++x) CHECK(f.at(x, y) == (x < 18 ? 0.0 : 1.0));
    }
    CHECK_THROWS_AS(subsample_aps(GrayImage(100, 100), 36), ShapeError);
  }

  TEST_CASE("exposure shift clips and is APS only")
  {
    Frame f(36, FrameKind::Aps, 0, 0.5);
    f.at(0, 0) = 0.9;
    CHECK(augment_exposure(f, 0.0).pixels == f.pixels);
    const auto up = augment_exposure(f, 0.3);
    CHECK(up.at(0, 0) == 1.0);
    CHECK(augment_exposure(f, -0.2).at(1, 0) == doctest::Approx(0.3));
    CHECK_THROWS(augment_exposure(Frame(36, FrameKind::Dvs), 0.1));
  }

  TEST_CASE("mirror")
  {
    Frame f(36, FrameKind::Aps, 0, 0.0);
    f.at(0, 4) = 1.0;
    auto [m, label] = mirror(f, Label{Region::L, Size::S});
    CHECK(m.at(35, 4) == 1.0);
    CHECK(*label == Label{Region::R, Size::S});
    CHECK(*mirror(f, Label{Region::C, Size::XL}).second == Label{Region::C, Size::XL});
    CHECK(*mirror(f, Label{}).second == Label{});
    CHECK(mirror(m).first.pixels == f.pixels);
  }

  TEST_CASE("PGM round trip")
  {
    Frame f(36, FrameKind::Aps, 0, 0.0);
    for (std::size_t i = 0; i < f.pixels.size(); ++i) f.pixels[i] = static_cast<double>(i % 256) / 255.0;
    const auto back = frame_from_pgm(encode_pgm(f));
    REQUIRE(back.width == 36);
    for (std::size_t i = 0; i < f.pixels.size(); ++i) CHECK(back.pixels[i] == doctest::Approx(f.pixels[i]));
    CHECK_THROWS_AS(decode_pgm("P6\n1 1\n255\n\0"), ParseError);
  }
}

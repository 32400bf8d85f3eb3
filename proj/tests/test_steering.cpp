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

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "pursuit/error.hpp"
#include "pursuit/steering/decision.hpp"
#include "pursuit/steering/position.hpp"
#include "steering_oracle.hpp"

using namespace pursuit;
using namespace pursuit::steering;

namespace {

ClassOutputs pure(Region r, Size s) { return ClassOutputs::one_hot(Label{r, s}.class_index()); }

double circular_distance(double a, double b)
{
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

TEST_SUITE("position vector")
{
  TEST_CASE("corner outputs")
  {
    const auto cm = analog_position(pure(Region::C, Size::M));
    CHECK(cm.dx == 0.0);
    CHECK(cm.dy == doctest::Approx(1.0 / 3.0));
    CHECK(cm.alpha == 90.0);
    CHECK(cm.valid);

    const auto rm = analog_position(pure(Region::R, Size::M));
    CHECK(rm.dx == doctest::Approx(1.0 / 3.0));
    CHECK(rm.dy == 0.0);
    CHECK(rm.alpha == 0.0);

    const auto n = analog_position(ClassOutputs::one_hot(9));
    CHECK(n.dy == doctest::Approx(-1.0 / 3.0));
    CHECK(n.alpha == doctest::Approx(270.0));
    CHECK_FALSE(n.valid);

    CHECK(analog_position(ClassOutputs::uniform()).dx == 0.0);
  }

  TEST_CASE("undefined direction")
  {
    ClassOutputs o;
    o.p[0] = o.p[6] = 0.5;  // dX = 0, dY = 0
    CHECK_FALSE(analog_position(o).valid);
  }

  TEST_CASE("size ordering of the distance estimate")
  {
    const SteeringParams p;
    const double s = analog_position(pure(Region::C, Size::S), p).p_mag;
    const double xl = analog_position(pure(Region::C, Size::XL), p).p_mag;
    CHECK(s == doctest::Approx(1.0 / (6.0 * p.kappa)));
    CHECK(xl == doctest::Approx(1.0 / (9.0 * p.kappa)));
    CHECK(s > xl);
    CHECK(analog_position(pure(Region::C, Size::M), p).p_mag == doctest::Approx(2.5));
  }

  TEST_CASE("properties over random outputs")
  {
    std::mt19937_64 rng(17);
    const SteeringParams params;
    for (int i = 0; i < 20'000; ++i) {
      const auto o = oracle::random_outputs(rng);
      const auto pv = analog_position(o, params);
      const auto ref = oracle::project(o, params.r);
      CHECK(pv.dx == doctest::Approx(ref.dx).epsilon(1e-12));
      CHECK(pv.dy == doctest::Approx(ref.dy).epsilon(1e-12));
      CHECK(pv.dx >= -1.0 / 3.0 - 1e-15);
      CHECK(pv.dx <= 1.0 / 3.0 + 1e-15);
      CHECK(pv.dy >= -1.0 / params.r - 1e-15);
      CHECK(pv.dy <= 1.0 / 3.0 + 1e-15);

      const auto sw = analog_position(oracle::swap_left_right(o), params);
      CHECK(sw.dx == -pv.dx);
      CHECK(sw.dy == pv.dy);
      if (pv.dx != 0.0 || pv.dy != 0.0) {
        CHECK(circular_distance(sw.alpha, 180.0 - pv.alpha) < 1e-9);
      }
      if (pv.dy != 0.0) CHECK(std::abs(pv.alpha - oracle::piecewise_alpha(pv.dx, pv.dy)) < 1e-9);
      if (pv.valid) CHECK(pv.p_mag == doctest::Approx(oracle::magnitude(o, params.kappa)).epsilon(1e-12));
    }
  }

  TEST_CASE("distance ignores how mass is spread over regions")
  {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
      auto o = oracle::random_outputs(rng);
      o.p[9] = 0.0;
      ClassOutputs shifted;
      // Move every size column into a single region, keeping size totals.
      const int target = static_cast<int>(rng() % 3);
      for (int s = 0; s < 3; ++s) shifted.p[target * 3 + s] = o.size_sum(static_cast<Size>(s));
      CHECK(size_numerator(shifted) == doctest::Approx(size_numerator(o)).epsilon(1e-12));
    }
  }

  TEST_CASE("rescale to the field of view")
  {
    CHECK(rescale_to_fov(90.0) == 0.0);
    CHECK(rescale_to_fov(1e-12) == doctest::Approx(40.5));
    CHECK(rescale_to_fov(180.0 - 1e-12) == doctest::Approx(-40.5));
    CHECK(rescale_to_fov(45.0) == doctest::Approx(20.25));
    CHECK_THROWS_AS(rescale_to_fov(0.0), OutOfFovError);
    CHECK_THROWS_AS(rescale_to_fov(200.0), OutOfFovError);
    CHECK(fov_to_alpha(rescale_to_fov(33.0)) == doctest::Approx(33.0));
  }

  TEST_CASE("bearing regions")
  {
    CHECK(region_of_bearing(0.0) == Region::C);
    CHECK(region_of_bearing(-13.6) == Region::L);
    CHECK(region_of_bearing(13.5) == Region::R);
    CHECK(region_of_bearing(-13.5) == Region::C);
    CHECK(region_of_bearing(40.5) == Region::R);
    CHECK(region_of_bearing(41.0) == Region::N);
    CHECK(region_of_bearing(-41.0) == Region::N);
  }

  TEST_CASE("encoded positions decode to their bearing and region")
  {
    for (double beta = -40.0; beta <= 40.0; beta += 0.25) {
      for (Size s : {Size::S, Size::M, Size::XL}) {
        const auto o = encode_position(beta, s);
        CHECK(o.total() == doctest::Approx(1.0).epsilon(1e-12));
        const auto pv = analog_position(o);
        CHECK(rescale_to_fov(pv.alpha) == doctest::Approx(beta).epsilon(1e-9).scale(1.0));
        const auto d = digitize(o);
        CHECK(d.size == s);
        // Exact sector edges may go either way.
        if (std::abs(std::abs(beta) - 13.5) > 1e-9) CHECK(d.region == region_of_bearing(beta));
      }
    }
  }

  TEST_CASE("kappa calibration")
  {
    std::vector<std::pair<double, double>> samples;
    for (double u : {0.1, 0.15, 0.2}) samples.emplace_back(u, u / 0.05);
    CHECK(calibrate_kappa(samples) == doctest::Approx(0.05));
    CHECK_THROWS(calibrate_kappa(std::vector<std::pair<double, double>>{}));
  }
}

TEST_SUITE("decisions")
{
  TEST_CASE("digitize")
  {
    ClassOutputs o;
    o.p.fill(0.4 / 9.0);
    o.p[0] = 0.6;
    CHECK(digitize(o) == Label{Region::L, Size::S});
    o.p.fill(0.5 / 9.0);
    o.p[9] = 0.5;
    CHECK(digitize(o) == Label{});
    ClassOutputs tie;
    tie.p[0] = tie.p[3] = 0.5;
    CHECK(digitize(tie).region == Region::L);
    CHECK(digitize(ClassOutputs::uniform()) == Label{Region::L, Size::S});
  }

  TEST_CASE("constraint examples")
  {
    ConstraintFilter f;
    CHECK(f.apply({Region::L, Size::M}) == Label{Region::L, Size::M});
    CHECK(f.apply({Region::R, Size::M}).region == Region::L);
    CHECK(f.apply({Region::C, Size::M}).region == Region::C);
    ConstraintFilter g;
    g.apply({Region::C, Size::S});
    CHECK(g.apply({Region::C, Size::XL}).size == Size::S);
  }

  TEST_CASE("exhaustive transition enumeration")
  {
    auto forbidden = [](const Label& a, const Label& b) {
      if (!region_transition_allowed(a.region, b.region)) return true;
      return a.size && b.size && !size_transition_allowed(*a.size, *b.size);
    };
    // Independent statement of the rule set.
    auto forbidden_ref = [](const Label& a, const Label& b) {
      const auto ra = a.region, rb = b.region;
      const bool region = (ra == Region::L && rb == Region::R) || (ra == Region::R && rb == Region::L) ||
                          (ra == Region::C && rb == Region::N) || (ra == Region::N && rb == Region::C);
      const bool size = a.size && b.size &&
                        ((*a.size == Size::S && *b.size == Size::XL) || (*a.size == Size::XL && *b.size == Size::S));
      return region || size;
    };
    for (int a = 0; a < 10; ++a) {
      for (int b = 0; b < 10; ++b) {
        CHECK(forbidden(Label::from_class(a), Label::from_class(b)) ==
              forbidden_ref(Label::from_class(a), Label::from_class(b)));
      }
    }
    // Every input sequence of length 5 over the 10 labels.
    long sequences = 0;
    std::function<void(ConstraintFilter, Label, int)> walk = [&](ConstraintFilter f, Label prev, int depth) {
      if (depth == 0) {
        ++sequences;
        return;
      }
      for (int k = 0; k < 10; ++k) {
        ConstraintFilter next = f;
        const Label out = next.apply(Label::from_class(k));
        REQUIRE_FALSE(forbidden_ref(prev, out));
        REQUIRE((out.region == Region::N) == !out.size.has_value());
        ConstraintFilter again = next;
        REQUIRE(again.apply(out) == out);  // idempotent on accepted state
        walk(next, out, depth - 1);
      }
    };
    for (int k = 0; k < 10; ++k) {
      ConstraintFilter f;
      const Label first = f.apply(Label::from_class(k));
      CHECK(first == Label::from_class(k));
      walk(f, first, 4);
    }
    CHECK(sequences == 100'000);
  }

  TEST_CASE("low-pass filter")
  {
    CHECK(lowpass_update(3.0, 3.0, 0.01, 0.1) == 3.0);
    CHECK(lowpass_update(0.0, 5.0, INFINITY, 0.1) == 5.0);
    CHECK(lowpass_update(0.0, 1.0, 0.1, 0.1) == doctest::Approx(0.5));
    const double a = lowpass_angle(350.0, 10.0, 0.01, 0.1);
    CHECK((a > 350.0 || a < 10.0));
    CHECK(circular_distance(a, 350.0) < 20.0);
    CHECK(lowpass_angle(350.0, 10.0, INFINITY, 0.1) == doctest::Approx(10.0));
  }

  TEST_CASE("command quantizer")
  {
    CommandQuantizer q;
    CHECK(q.update(85.0, 1.5) == QuantizedCommand{80.0, 1.0});
    CHECK_FALSE(q.update(95.0, 1.5));
    CHECK(q.update(101.0, 1.5) == QuantizedCommand{100.0, 1.0});
    CHECK(q.update(101.0, 2.2) == QuantizedCommand{100.0, 2.0});
    for (int i = 0; i < 10; ++i) CHECK_FALSE(q.update(101.0, 2.2));
  }

  TEST_CASE("steering state wires filter, low-pass and quantizer")
  {
    SteeringState s;
    auto u = s.update(pure(Region::C, Size::M), 0.0);
    CHECK(u.alpha == 90.0);
    CHECK(u.command.has_value());
    u = s.update(pure(Region::R, Size::M), 0.1);
    CHECK(u.alpha < 90.0);
    CHECK(u.alpha > 0.0);
    u = s.update(ClassOutputs::one_hot(9), 0.2);
    CHECK_FALSE(u.position_valid);
    CHECK(u.decision.region == Region::N);  // R -> N is allowed
    CHECK_THROWS_AS(SteeringState(SteeringParams{0.0}), ConfigError);
  }
}

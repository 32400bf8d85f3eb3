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
#include <numbers>
#include <random>

#include "doctest.h"
#include "pursuit/control/apf.hpp"
#include "pursuit/control/fsm.hpp"
#include "pursuit/control/laser_scan.hpp"
#include "pursuit/error.hpp"
#include "pursuit/steering/position.hpp"

using namespace pursuit;
using namespace pursuit::control;
using std::numbers::pi;

namespace {

LaserScan make_scan(const std::function<double(double)>& range_at)
{
  LaserScan s;
  for (int i = 0; i < 181; ++i) {
    const double a = (-90.0 + i) * pi / 180.0;
    s.angles.push_back(a);
    s.ranges.push_back(std::min(range_at(a), s.max_range));
  }
  return s;
}

LaserScan clear_scan() { return make_scan([](double) { return 10.0; }); }

steering::PositionVector position_for(const Label& l)
{
  if (l.region == Region::N) return {};
  return steering::analog_position(ClassOutputs::one_hot(l.class_index()));
}

}  // namespace

TEST_SUITE("laser scan")
{
  TEST_CASE("validation")
  {
    auto s = clear_scan();
    CHECK_NOTHROW(s.validate());
    s.ranges[3] = 0.0;
    CHECK_THROWS(s.validate());
    s = clear_scan();
    std::swap(s.angles[0], s.angles[1]);
    CHECK_THROWS(s.validate());
  }

  TEST_CASE("nearest and windowed minimum")
  {
    auto s = make_scan([](double a) { return a > 0.5 ? 2.0 : 5.0; });
    CHECK(s.min_range() == 2.0);
    CHECK(s.angles[s.nearest_index()] > 0.5);
    CHECK(s.min_range_within(0.2) == 5.0);
  }
}

TEST_SUITE("potential field")
{
  const ApfParams params;

  TEST_CASE("nothing inside the soft zone")
  {
    const auto f = repulsive_field(clear_scan(), params);
    for (double m : f.magnitudes) CHECK(m == 0.0);
    CHECK(f.fx == 0.0);
    CHECK(f.fy == 0.0);
    const auto b = repulsive_field(make_scan([](double a) { return a == 0.0 ? 1.5 : 10.0; }), params);
    CHECK(b.magnitudes[90] == 0.0);
  }

  TEST_CASE("magnitude law")
  {
    const auto f = repulsive_field(make_scan([](double a) { return std::abs(a) < 1e-9 ? 1.0 : 10.0; }), params);
    const double expected = params.eta * std::pow(1.0 / 1.0 - 1.0 / 1.5, 2);
    CHECK(f.magnitudes[90] == doctest::Approx(expected));
    CHECK(f.fx == doctest::Approx(-expected));
    CHECK(f.fy == doctest::Approx(0.0));
  }

  TEST_CASE("symmetric obstacles cancel laterally")
  {
    const auto f = repulsive_field(make_scan([](double a) { return std::abs(std::abs(a) - pi / 4) < 0.05 ? 1.0 : 10.0; }),
                                   params);
    CHECK(f.fy == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(f.fx < 0.0);
  }

  TEST_CASE("non-positive range is an error")
  {
    auto s = clear_scan();
    s.ranges[10] = -1.0;
    CHECK_THROWS_AS(repulsive_field(s, params), Error);
  }

  TEST_CASE("least repulsive direction")
  {
    const auto angles = clear_scan().angles;
    std::vector<double> zero(181, 0.0);
    CHECK(least_repulsive_direction(zero, angles, params.window_deg * pi / 180) == 0.0);
    std::vector<double> left(181, 0.0);
    for (int i = 91; i < 181; ++i) left[i] = 1.0;  // positive bearings are to the left
    CHECK(least_repulsive_direction(left, angles, params.window_deg * pi / 180) < 0.0);
    std::vector<double> single(181, 1.0);
    single[40] = 0.2;
    single[150] = 0.1;
    CHECK(least_repulsive_direction(single, angles, 0.0) == angles[150]);
  }

  TEST_CASE("soft scale")
  {
    auto at = [&](double r) { return soft_scale(make_scan([r](double) { return r; }), params); };
    CHECK(at(2.0) == 1.0);
    CHECK(at(1.1) == doctest::Approx(0.5));
    CHECK(at(0.6) == 0.0);
    double prev = -1.0;
    for (double r = 0.1; r < 3.0; r += 0.01) {
      CHECK(at(r) >= prev);
      prev = at(r);
    }
  }

  TEST_CASE("parameter validation")
  {
    ApfParams p;
    p.r_hard = 2.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.r_hard = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.v_max = 2.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
}

TEST_SUITE("fsm")
{
  const ApfParams params;

  TEST_CASE("wander sees prey on the left")
  {
    const Label d{Region::L, Size::M};
    const auto r = fsm_step({}, d, position_for(d), clear_scan(), 0.001, params);
    CHECK(r.state.mode == Mode::Approach);
    CHECK(r.command.w == doctest::Approx(pi / 3));
    CHECK(r.command.v > 0.0);
    const Label dr{Region::R, Size::M};
    CHECK(fsm_step({}, dr, position_for(dr), clear_scan(), 0.001, params).command.w == doctest::Approx(-pi / 3));
    const Label dc{Region::C, Size::M};
    CHECK(fsm_step({}, dc, position_for(dc), clear_scan(), 0.001, params).command.w == 0.0);
  }

  TEST_CASE("lost prey spins toward the last side")
  {
    FsmState s;
    s.mode = Mode::Approach;
    s.last_seen = Side::Right;
    const auto r = fsm_step(s, Label{}, {}, clear_scan(), 0.001, params);
    CHECK(r.state.mode == Mode::Approach);
    CHECK(r.command.v == 0.0);
    CHECK(r.command.w == doctest::Approx(-pi / 2));
    s.lost_timer = params.lost_timeout;
    CHECK(fsm_step(s, Label{}, {}, clear_scan(), 0.001, params).state.mode == Mode::Wander);
  }

  TEST_CASE("goal reached and released after the timeout")
  {
    const Label d{Region::C, Size::XL};
    const auto near = make_scan([](double a) { return std::abs(a) < 0.1 ? 0.9 : 10.0; });
    auto r = fsm_step({}, d, position_for(d), near, 0.001, params);
    CHECK(r.state.mode == Mode::GoalAchieved);
    CHECK(r.command.v == 0.0);
    CHECK(r.command.w == 0.0);
    FsmState s = r.state;
    s.goal_timer = params.goal_timeout - 0.0005;
    r = fsm_step(s, Label{}, {}, clear_scan(), 0.001, params);
    CHECK(r.state.mode == Mode::Wander);
  }

  TEST_CASE("hard zone preempts every mode")
  {
    const auto close = make_scan([](double a) { return a > 0.3 ? 0.5 : 4.0; });
    for (Mode m : {Mode::Wander, Mode::Approach, Mode::GoalAchieved, Mode::Avoid}) {
      for (int k = 0; k < 10; ++k) {
        FsmState s;
        s.mode = m;
        const Label d = Label::from_class(k);
        const auto r = fsm_step(s, d, position_for(d), close, 0.001, params);
        CHECK(r.state.mode == Mode::Avoid);
        CHECK(r.command.v == 0.0);
        CHECK(r.command.w < 0.0);  // obstacle on the left, turn right
      }
    }
  }

  TEST_CASE("command bounds and determinism over random inputs")
  {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> range(0.05, 10.0), u(0.0, 1.0);
    FsmState s;
    for (int i = 0; i < 20'000; ++i) {
      const double base = range(rng);
      const double blob = range(rng);
      const double at = (u(rng) - 0.5) * pi;
      const auto scan = make_scan([&](double a) { return std::abs(a - at) < 0.3 ? blob : base + 1.0; });
      const Label d = Label::from_class(static_cast<int>(rng() % 10));
      const auto pos = position_for(d);
      const auto r = fsm_step(s, d, pos, scan, 0.001, params);
      const auto again = fsm_step(s, d, pos, scan, 0.001, params);
      CHECK(r.state == again.state);
      CHECK(r.command.v == again.command.v);
      CHECK(r.command.w == again.command.w);
      CHECK(std::isfinite(r.command.v));
      CHECK(std::abs(r.command.v) <= params.v_max);
      CHECK(std::abs(r.command.w) <= pi / 2 + 1e-12);
      if (scan.min_range() < params.r_hard) CHECK(r.command.v == 0.0);
      s = r.state;
    }
  }

  TEST_CASE("wander perturbation is seeded and bounded")
  {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const double w = wander_perturbation(3, i, pi / 6);
      CHECK(std::abs(w) <= pi / 6);
      CHECK(w == wander_perturbation(3, i, pi / 6));
    }
    CHECK(wander_perturbation(3, 0, 1.0) != wander_perturbation(4, 0, 1.0));
  }

  TEST_CASE("wander turns away from a wall in the soft zone")
  {
    // Wall along the left side at 1 m.
    const auto scan = make_scan([](double a) { return a > 0.0 ? std::min(10.0, 1.0 / std::sin(a)) : 10.0; });
    ApfParams p;
    p.wander_w_max = 0.0;
    const auto r = fsm_step({}, Label{}, {}, scan, 0.001, p);
    CHECK(r.state.mode == Mode::Wander);
    CHECK(r.command.w < 0.0);
    CHECK(r.command.v < p.wander_v);
    CHECK(r.command.v > 0.0);
  }
}

// Copyright 2026 The gaitbo Authors
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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaitbo/errors.h"
#include "gaitbo/metrics/cost.h"
#include "gaitbo/metrics/dog.h"
#include "gaitbo/random.h"
#include "test_util.h"

using namespace gaitbo;
using metrics::CostInputs;
using metrics::StepRecord;
using testing::close_rel;

namespace {

// Second, independently written implementation of the step metrics.
struct OracleScore {
  double m[5];
  double total;
};

OracleScore oracle_score(const StepRecord& r, double lo, double hi, double v_human) {
  OracleScore s{};
  s.m[0] = (r.knee_swing <= lo || r.knee_swing >= hi) ? 0.0 : 1.0;
  s.m[1] = (r.ankle_strike >= 0.0 || r.ankle_toe_off <= 0.0) ? 0.0 : 1.0;
  s.m[2] = (r.com_y_midstance - r.com_y_strike > 0.0 && r.com_y_midstance - r.com_y_toe_off > 0.0)
               ? 1.0
               : 0.0;
  s.m[3] = std::signbit(r.torso_mean) || r.torso_mean == 0.0 ? 0.0 : 1.0;
  const double dv = r.speed - v_human;
  s.m[4] = dv < 0.0 ? -dv : dv;
  s.total = ((s.m[0] + s.m[1]) + (s.m[2] + s.m[3])) + s.m[4];
  return s;
}

StepRecord random_record(Rng& rng) {
  StepRecord r;
  r.knee_swing = uniform(rng, -0.2, 2.0);
  r.ankle_strike = uniform(rng, -0.5, 0.5);
  r.ankle_toe_off = uniform(rng, -0.5, 0.8);
  r.com_y_strike = uniform(rng, 0.9, 1.1);
  r.com_y_midstance = uniform(rng, 0.9, 1.1);
  r.com_y_toe_off = uniform(rng, 0.9, 1.1);
  r.torso_mean = uniform(rng, -0.4, 0.4);
  r.speed = uniform(rng, -1.5, 3.0);
  r.t_next_strike = uniform(rng, 0.0, 4.9);
  return r;
}

StepRecord good_step(double speed) {
  StepRecord r;
  r.knee_swing = 1.0;
  r.ankle_strike = -0.1;
  r.ankle_toe_off = 0.2;
  r.com_y_strike = 1.00;
  r.com_y_midstance = 1.03;
  r.com_y_toe_off = 1.01;
  r.torso_mean = 0.1;
  r.speed = speed;
  r.t_next_strike = 1.0;
  return r;
}

// Synthetic trajectory: 100 Hz samples, hand-placed left-leg events.
//   CoM x = 1.2 t; CoM y is a tent peaking at t = 0.3; pitch 0.1.
//   Left knee flexes as 0.8 sin over the swing [0.5, 1.1], peak at 0.8 s.
sim::Trajectory synthetic(double end, bool with_second_strike) {
  sim::Trajectory tr;
  const int knee = sim::joint_dof(sim::kLeft, sim::kKnee);
  const int ankle = sim::joint_dof(sim::kLeft, sim::kAnkle);
  auto state = [&](double t) {
    sim::Sample s;
    s.time = t;
    s.com = {1.2 * t, 1.03 - 0.1 * std::abs(t - 0.3)};
    s.q[sim::kX] = 1.2 * t;
    s.q[sim::kPitch] = 0.1;
    s.q[knee] = (t > 0.5 && t < 1.1) ? 0.8 * std::sin(std::numbers::pi * (t - 0.5) / 0.6) : 0.1;
    return s;
  };
  for (int i = 0; i * 0.01 <= end + 1e-12; ++i) tr.samples.push_back(state(i / 100.0));
  auto event = [&](double t, sim::EventKind k, double ankle_angle) {
    sim::StepEvent e;
    e.time = t;
    e.side = sim::kLeft;
    e.kind = k;
    e.snapshot = state(t);
    e.snapshot.q[ankle] = ankle_angle;
    tr.events.push_back(e);
  };
  event(0.1, sim::EventKind::kHeelStrike, -0.1);
  event(0.5, sim::EventKind::kToeOff, 0.2);
  if (with_second_strike) event(1.1, sim::EventKind::kHeelStrike, -0.05);
  tr.end_time = end;
  return tr;
}

}  // namespace

TEST_CASE("M1 is a strict interval test on peak swing knee flexion") {
  metrics::DogConfig c;
  StepRecord r;
  r.knee_swing = c.knee_low;
  CHECK(metrics::metric_m1(r, c) == 0);
  r.knee_swing = c.knee_high;
  CHECK(metrics::metric_m1(r, c) == 0);
  r.knee_swing = 0.5 * (c.knee_low + c.knee_high);
  CHECK(metrics::metric_m1(r, c) == 1);
  r.knee_swing = std::nextafter(c.knee_low, 10.0);
  CHECK(metrics::metric_m1(r, c) == 1);
}

TEST_CASE("M2 requires dorsiflexed strike and plantarflexed toe-off") {
  StepRecord r;
  r.ankle_strike = -0.1;
  r.ankle_toe_off = 0.1;
  CHECK(metrics::metric_m2(r) == 1);
  r.ankle_strike = 0.0;
  CHECK(metrics::metric_m2(r) == 0);
  r.ankle_strike = -0.1;
  r.ankle_toe_off = 0.0;
  CHECK(metrics::metric_m2(r) == 0);
}

TEST_CASE("M3 needs mid-stance CoM strictly highest") {
  StepRecord r;
  r.com_y_strike = 1.0;
  r.com_y_midstance = 1.0;
  r.com_y_toe_off = 0.9;
  CHECK(metrics::metric_m3(r) == 0);
  r.com_y_midstance = 1.01;
  CHECK(metrics::metric_m3(r) == 1);
  r.com_y_toe_off = 1.01;
  CHECK(metrics::metric_m3(r) == 0);
}

TEST_CASE("M4 tests forward torso lean") {
  StepRecord r;
  r.torso_mean = 0.0;
  CHECK(metrics::metric_m4(r) == 0);
  r.torso_mean = 0.05;
  CHECK(metrics::metric_m4(r) == 1);
  r.torso_mean = -0.05;
  CHECK(metrics::metric_m4(r) == 0);
}

TEST_CASE("M5 is the absolute deviation from human walking speed") {
  StepRecord r;
  r.speed = 1.3;
  CHECK(metrics::metric_m5(r) == 0.0);
  r.speed = 0.0;
  CHECK(metrics::metric_m5(r) == doctest::Approx(1.3).epsilon(1e-15));
  r.speed = 1.8;
  CHECK(metrics::metric_m5(r) == doctest::Approx(0.5).epsilon(1e-14));
  r.speed = -0.7;
  CHECK(metrics::metric_m5(r) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("per-step score is the sum of the five metrics") {
  const metrics::StepScore s = metrics::score_step(good_step(1.3));
  CHECK(s.m1 + s.m2 + s.m3 + s.m4 == 4);
  CHECK(s.m5 == 0.0);
  CHECK(s.score == 4.0);
  const metrics::DogScore one = metrics::dog_score(std::vector<StepRecord>{good_step(1.3)});
  CHECK(one.n == 1);
  CHECK(one.phi == 4.0);
}

TEST_CASE("phi of no steps is zero") {
  const metrics::DogScore s = metrics::dog_score(std::vector<StepRecord>{});
  CHECK(s.n == 0);
  CHECK(s.phi == 0.0);
  CHECK(metrics::dog_score(sim::Trajectory{}).phi == 0.0);
}

TEST_CASE("multi-step phi matches a by-hand table") {
  // step  M1 M2 M3 M4  speed  M5    score
  //  a     1  1  1  1  1.30   0.00  4.00
  //  b     0  1  1  1  1.00   0.30  3.30
  //  c     1  0  0  1  1.55   0.25  2.25
  //  d     0  0  0  0  0.20   1.10  1.10
  StepRecord a = good_step(1.3);
  StepRecord b = good_step(1.0);
  b.knee_swing = 0.2;
  StepRecord c = good_step(1.55);
  c.ankle_strike = 0.05;
  c.com_y_toe_off = 1.05;
  StepRecord d = good_step(0.2);
  d.knee_swing = 1.5;
  d.ankle_toe_off = -0.01;
  d.com_y_midstance = 0.99;
  d.torso_mean = -0.02;
  const metrics::DogScore s = metrics::dog_score(std::vector<StepRecord>{a, b, c, d});
  REQUIRE(s.n == 4);
  CHECK(s.steps[0].score == doctest::Approx(4.00).epsilon(1e-14));
  CHECK(s.steps[1].score == doctest::Approx(3.30).epsilon(1e-14));
  CHECK(s.steps[2].score == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(s.steps[3].score == doctest::Approx(1.10).epsilon(1e-14));
  CHECK(s.phi == doctest::Approx(10.65).epsilon(1e-14));
}

TEST_CASE("only cycles finished inside the scoring window count") {
  StepRecord early = good_step(1.3);
  StepRecord late = good_step(1.3);
  late.t_next_strike = 5.2;
  const metrics::DogScore s = metrics::dog_score(std::vector<StepRecord>{early, late});
  CHECK(s.n == 1);
  CHECK(s.phi == 4.0);
}

TEST_CASE("phi is additive over step-aligned partitions") {
  Rng rng(11);
  std::vector<StepRecord> steps;
  for (int i = 0; i < 40; ++i) steps.push_back(random_record(rng));
  const double whole = metrics::dog_score(steps).phi;
  for (std::size_t cut : {0ul, 1ul, 17ul, 39ul, 40ul}) {
    const std::vector<StepRecord> head(steps.begin(), steps.begin() + cut);
    const std::vector<StepRecord> tail(steps.begin() + cut, steps.end());
    CHECK(metrics::dog_score(head).phi + metrics::dog_score(tail).phi ==
          doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("metrics agree with an independent implementation on random records") {
  Rng rng(2024);
  metrics::DogConfig c;
  for (int i = 0; i < 5000; ++i) {
    const StepRecord r = random_record(rng);
    const metrics::StepScore s = metrics::score_step(r, c);
    const OracleScore o = oracle_score(r, c.knee_low, c.knee_high, c.v_human);
    REQUIRE(s.m1 == o.m[0]);
    REQUIRE(s.m2 == o.m[1]);
    REQUIRE(s.m3 == o.m[2]);
    REQUIRE(s.m4 == o.m[3]);
    REQUIRE(close_rel(s.m5, o.m[4], 1e-12));
    REQUIRE(close_rel(s.score, o.total, 1e-12));
  }
}

TEST_CASE("extract_steps reproduces a hand-built gait cycle") {
  const sim::Trajectory tr = synthetic(1.5, true);
  const std::vector<StepRecord> steps = metrics::extract_steps(tr);
  REQUIRE(steps.size() == 1);
  const StepRecord& r = steps[0];
  CHECK(r.side == sim::kLeft);
  CHECK(r.t_strike == 0.1);
  CHECK(r.t_toe_off == 0.5);
  CHECK(r.t_next_strike == 1.1);
  CHECK(r.ankle_strike == -0.1);
  CHECK(r.ankle_toe_off == 0.2);
  CHECK(r.com_y_strike == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(r.com_y_midstance == doctest::Approx(1.03).epsilon(1e-12));
  CHECK(r.com_y_toe_off == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(r.knee_swing == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.torso_mean == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.speed == doctest::Approx(1.2).epsilon(1e-12));
  const metrics::StepScore s = metrics::score_step(r);
  CHECK(s.m1 + s.m2 + s.m3 + s.m4 == 4);
  CHECK(s.score == doctest::Approx(4.1).epsilon(1e-12));
}

TEST_CASE("extract_steps on trajectories without complete cycles") {
  sim::Trajectory none = synthetic(1.5, true);
  none.events.clear();
  CHECK(metrics::extract_steps(none).empty());
  // A fall before the second heel strike leaves the cycle incomplete.
  CHECK(metrics::extract_steps(synthetic(1.0, false)).empty());
  // A cycle with no toe-off between its strikes is not a step.
  sim::Trajectory no_toe_off = synthetic(1.5, true);
  no_toe_off.events.erase(no_toe_off.events.begin() + 1);
  CHECK(metrics::extract_steps(no_toe_off).empty());
}

TEST_CASE("smooth cost examples") {
  CostInputs in;
  in.s = in.s_tgt;
  CHECK(metrics::smooth_cost(in) == doctest::Approx(1.3).epsilon(1e-15));
  in.t = 100.0;
  in.d = 130.0;
  CHECK(metrics::smooth_cost(in) == doctest::Approx(1.0 / 101.0 + 0.3 / 131.0).epsilon(1e-15));
  CHECK(metrics::smooth_cost(in) == doctest::Approx(0.012191).epsilon(1e-4));
}

TEST_CASE("smooth cost strictly decreases with time walked") {
  CostInputs in;
  in.d = 3.0;
  in.s = 0.9;
  double prev = metrics::smooth_cost(in);
  for (double t = 0.25; t <= 100.0; t += 0.25) {
    in.t = t;
    const double c = metrics::smooth_cost(in);
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("the time and distance terms of the smooth cost lie in (0, 1.3]") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    CostInputs in;
    in.t = uniform(rng, 0.0, 1e4) * (i % 7 == 0 ? 0.0 : 1.0);
    in.d = uniform(rng, 0.0, 1e4) * (i % 5 == 0 ? 0.0 : 1.0);
    in.s = in.s_tgt;
    const double c = metrics::smooth_cost(in);
    CHECK(c > 0.0);
    CHECK(c <= 1.3);
  }
}

TEST_CASE("cma cost examples") {
  CostInputs in;
  in.fell = true;
  in.x_fall = 50.0;
  CHECK(metrics::cma_cost(in) == 250.0);
  in.x_fall = 0.0;
  CHECK(metrics::cma_cost(in) == 300.0);
  CostInputs walk;
  walk.v_avg = walk.v_tgt;
  walk.c_tr = 0.4;
  CHECK(metrics::cma_cost(walk) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("cma cost is discontinuous across the fall boundary") {
  CostInputs a;
  a.v_avg = 1.25;
  a.c_tr = 0.35;
  a.x_fall = 98.0;
  CostInputs b = a;
  b.fell = true;
  const double walk = metrics::cma_cost(a);
  const double fall = metrics::cma_cost(b);
  CHECK(walk == doctest::Approx(5.35).epsilon(1e-12));
  CHECK(fall == 202.0);
  CHECK(fall - walk >= 200.0 - a.x_fall - 100.0 * std::abs(a.v_avg - a.v_tgt) - a.c_tr);
  CHECK(walk < 100.0);
}

TEST_CASE("costs agree with independent formulas on random inputs") {
  Rng rng(99);
  for (int i = 0; i < 5000; ++i) {
    CostInputs in;
    in.t = uniform(rng, 0.0, 100.0);
    in.d = uniform(rng, 0.0, 150.0);
    in.s = uniform(rng, -1.0, 2.5);
    in.fell = i % 2 == 0;
    in.x_fall = uniform(rng, 0.0, 150.0);
    in.v_avg = uniform(rng, -1.0, 2.5);
    in.c_tr = uniform(rng, 0.0, 3.0);
    const double smooth = 1.0 / (in.t + 1.0) + 0.3 * (1.0 / (in.d + 1.0)) + (in.s - 1.3) / 100.0;
    const double cma = in.fell ? -(in.x_fall - 300.0) : 100.0 * std::hypot(in.v_avg - 1.3, 0.0) + in.c_tr;
    REQUIRE(close_rel(metrics::smooth_cost(in), smooth, 1e-12));
    REQUIRE(close_rel(metrics::cma_cost(in), cma, 1e-12));
  }
}

TEST_CASE("cost inputs are read off the trajectory") {
  sim::Trajectory tr;
  tr.end_time = 20.0;
  tr.final_hip_x = 24.0;
  tr.effort = 1000.0;
  tr.total_mass = 80.0;
  tr.gravity = 10.0;
  tr.termination = sim::Termination::kFell;
  tr.x_fall = 24.0;
  const CostInputs in = metrics::cost_inputs(tr);
  CHECK(in.t == 20.0);
  CHECK(in.d == 24.0);
  CHECK(in.s == doctest::Approx(1.2));
  CHECK(in.fell);
  CHECK(in.x_fall == 24.0);
  CHECK(in.c_tr == doctest::Approx(1000.0 / (800.0 * 24.0)));
  // Backward travel never produces negative distance or x_fall.
  tr.final_hip_x = -2.0;
  tr.x_fall = -2.0;
  const CostInputs back = metrics::cost_inputs(tr);
  CHECK(back.d == 0.0);
  CHECK(back.x_fall == 0.0);
  CHECK(back.c_tr == doctest::Approx(1000.0 / 800.0));
}

TEST_CASE("fault costs are the worst case of each cost") {
  CHECK(metrics::fault_cost(metrics::CostVariant::kCma) == 300.0);
  CostInputs worst;
  worst.s = 2.3;  // 1 m/s above target adds 0.01
  CHECK(metrics::fault_cost(metrics::CostVariant::kSmooth) >= metrics::smooth_cost(worst));
  CHECK(metrics::cost_variant_from_string("smooth") == metrics::CostVariant::kSmooth);
  CHECK(metrics::cost_variant_from_string("cma") == metrics::CostVariant::kCma);
  CHECK_THROWS_AS(metrics::cost_variant_from_string("fast"), ParameterError);
}

TEST_CASE("score CSV lists each step") {
  const metrics::DogScore s = metrics::dog_score(std::vector<StepRecord>{good_step(1.3), good_step(1.0)});
  std::ostringstream out;
  metrics::write_score_csv(out, "p7", s);
  const std::string text = out.str();
  CHECK(text.find("id,n,phi\np7,2,") == 0);
  CHECK(text.find("p7,1,1,1,1,1,") != std::string::npos);
}

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

#include "gaitbo/control/muscle.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitbo/errors.h"

namespace gaitbo::control {

namespace {

constexpr std::array<std::string_view, kNumMuscles> kMuscleNames = {"SOL", "TA",  "GAS",
                                                                    "VAS", "HAM", "GLU",
                                                                    "HFL"};
constexpr std::array<std::string_view, 3> kJointNames = {"hip", "knee", "ankle"};

// log(0.05): f_l drops to 5% one width away from optimum.
const double kBellExponent = std::log(0.05);

}  // namespace

std::string_view muscle_name(MuscleId id) { return kMuscleNames.at(id); }

MuscleId muscle_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumMuscles; ++i) {
    if (kMuscleNames[i] == name) return static_cast<MuscleId>(i);
  }
  throw ParameterError("unknown muscle '" + std::string(name) + "'");
}

double MomentArm::at(double angle) const {
  if (table.empty()) return arm;
  if (angle <= table.front().first) return table.front().second;
  if (angle >= table.back().first) return table.back().second;
  auto it = std::upper_bound(table.begin(), table.end(), angle,
                             [](double a, const auto& p) { return a < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (angle - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

double MomentArm::integral(double angle) const {
  if (table.empty()) return arm * (angle - ref_angle);
  // Trapezoids over the breakpoints between ref_angle and angle are exact for
  // a piecewise-linear arm.
  const double a = std::min(ref_angle, angle);
  const double b = std::max(ref_angle, angle);
  std::vector<double> xs{a};
  for (const auto& p : table) {
    if (p.first > a && p.first < b) xs.push_back(p.first);
  }
  xs.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    sum += 0.5 * (at(xs[i - 1]) + at(xs[i])) * (xs[i] - xs[i - 1]);
  }
  return angle >= ref_angle ? sum : -sum;
}

double force_length(const MuscleConstants& c, double l_ce) {
  const double x = std::abs((l_ce - c.opt_length) / (c.opt_length * c.width));
  return std::exp(kBellExponent * x * x * x);
}

double force_velocity(const MuscleConstants& c, double v_ce) {
  const double v = v_ce / (c.opt_length * c.max_velocity);
  if (v <= -1.0) return 0.0;
  if (v <= 0.0) return (1.0 + v) / (1.0 - c.curvature * v);
  const double n = c.eccentric_ratio;
  const double k = (1.0 + c.curvature) / (n - 1.0);
  return n - (n - 1.0) / (1.0 + k * v);
}

double force_velocity_slope(const MuscleConstants& c, double v_ce) {
  const double scale = c.opt_length * c.max_velocity;
  const double v = v_ce / scale;
  if (v <= -1.0) return 0.0;
  if (v <= 0.0) {
    const double den = 1.0 - c.curvature * v;
    return (1.0 + c.curvature) / (den * den) / scale;
  }
  const double n = c.eccentric_ratio;
  const double k = (1.0 + c.curvature) / (n - 1.0);
  const double den = 1.0 + k * v;
  return (n - 1.0) * k / (den * den) / scale;
}

double passive_force(const MuscleConstants& c, double l_ce) {
  const double start = c.passive_start * c.opt_length;
  if (l_ce <= start) return 0.0;
  const double x = (l_ce - start) / (c.opt_length * c.width);
  return c.max_force * x * x;
}

double contractile_force(const MuscleConstants& c, double activation, double l_ce,
                         double v_ce) {
  const double active = c.max_force * activation * force_length(c, l_ce) * force_velocity(c, v_ce);
  return std::max(0.0, active + passive_force(c, l_ce));
}

double step_activation(double activation, double stimulus, double tau, double dt) {
  return stimulus + (activation - stimulus) * std::exp(-dt / tau);
}

void Muscle::update_length(const MuscleConstants& c, const std::array<double, 3>& angles,
                           const std::array<double, 3>& rates) {
  double excursion = 0.0;
  double rate = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const MomentArm& a = c.arms[j];
    if (!a.spans()) continue;
    excursion += a.action * a.integral(angles[j]);
    rate += a.action * a.at(angles[j]) * rates[j];
  }
  l_ce = c.opt_length - c.pennation * excursion;
  v_ce = -c.pennation * rate;
}

double muscle_force(Muscle& m, const MuscleConstants& c, double stimulus, double dt,
                    double tau) {
  const double s = std::clamp(stimulus, kMinStimulus, kMaxStimulus);
  m.activation = std::clamp(step_activation(m.activation, s, tau, dt), 0.0, 1.0);
  m.force = contractile_force(c, m.activation, m.l_ce, m.v_ce);
  m.damping = m.force > 0.0 ? c.max_force * m.activation * force_length(c, m.l_ce) *
                                  force_velocity_slope(c, m.v_ce)
                            : 0.0;
  return m.force;
}

double joint_torque(const Muscle& m, const MuscleConstants& c, sim::Joint joint,
                    double angle) {
  const MomentArm& a = c.arms[joint];
  if (!a.spans()) {
    throw ParameterError(std::string(muscle_name(c.id)) + " does not span the " +
                         std::string(kJointNames[joint]));
  }
  return a.action * m.force * a.at(angle);
}

std::array<MuscleConstants, kNumMuscles> default_muscles() {
  using sim::kAnkle;
  using sim::kHip;
  using sim::kKnee;
  std::array<MuscleConstants, kNumMuscles> m{};
  auto make = [](MuscleId id, double f, double l, double v) {
    MuscleConstants c;
    c.id = id;
    c.max_force = f;
    c.opt_length = l;
    c.max_velocity = v;
    return c;
  };
  m[kSOL] = make(kSOL, 4000.0, 0.04, 6.0);
  m[kSOL].arms[kAnkle] = {+1, 0.05, -0.10, {}};
  m[kTA] = make(kTA, 800.0, 0.06, 12.0);
  m[kTA].arms[kAnkle] = {-1, 0.04, 0.10, {}};
  m[kGAS] = make(kGAS, 1500.0, 0.05, 12.0);
  m[kGAS].arms[kAnkle] = {+1, 0.05, -0.10, {}};
  m[kGAS].arms[kKnee] = {+1, 0.05, 0.10, {}};
  m[kVAS] = make(kVAS, 6000.0, 0.08, 12.0);
  m[kVAS].arms[kKnee] = {-1, 0.06, 0.30, {}};
  m[kHAM] = make(kHAM, 3000.0, 0.10, 12.0);
  m[kHAM].arms[kKnee] = {+1, 0.05, 0.10, {}};
  m[kHAM].arms[kHip] = {-1, 0.08, 0.30, {}};
  m[kGLU] = make(kGLU, 1500.0, 0.11, 12.0);
  m[kGLU].arms[kHip] = {-1, 0.10, 0.30, {}};
  m[kHFL] = make(kHFL, 2000.0, 0.11, 12.0);
  m[kHFL].arms[kHip] = {+1, 0.10, -0.10, {}};
  return m;
}

void to_json(nlohmann::json& j, const MuscleConstants& c) {
  j = {{"max_force", c.max_force},
       {"opt_length", c.opt_length},
       {"max_velocity", c.max_velocity},
       {"width", c.width},
       {"pennation", c.pennation},
       {"passive_start", c.passive_start},
       {"eccentric_ratio", c.eccentric_ratio},
       {"curvature", c.curvature}};
  auto& arms = j["moment_arms"] = nlohmann::json::object();
  for (std::size_t k = 0; k < 3; ++k) {
    const MomentArm& a = c.arms[k];
    if (!a.spans()) continue;
    nlohmann::json arm = {{"action", a.action}, {"arm", a.arm}, {"ref_angle", a.ref_angle}};
    if (!a.table.empty()) arm["table"] = a.table;
    arms[std::string(kJointNames[k])] = arm;
  }
}

void from_json(const nlohmann::json& j, MuscleConstants& c) {
  c.max_force = j.at("max_force").get<double>();
  c.opt_length = j.at("opt_length").get<double>();
  c.max_velocity = j.at("max_velocity").get<double>();
  c.width = j.value("width", 0.56);
  c.pennation = j.value("pennation", 0.5);
  c.passive_start = j.value("passive_start", 1.0);
  c.eccentric_ratio = j.value("eccentric_ratio", 1.5);
  c.curvature = j.value("curvature", 5.0);
  c.arms = {};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string name(kJointNames[k]);
    if (!j.at("moment_arms").contains(name)) continue;
    const auto& a = j["moment_arms"][name];
    c.arms[k].action = a.at("action").get<int>();
    c.arms[k].arm = a.at("arm").get<double>();
    c.arms[k].ref_angle = a.value("ref_angle", 0.0);
    if (a.contains("table")) {
      c.arms[k].table = a["table"].get<std::vector<std::pair<double, double>>>();
    }
  }
}

}  // namespace gaitbo::control

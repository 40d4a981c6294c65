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

#ifndef GAITBO_CONTROL_MUSCLE_H_
#define GAITBO_CONTROL_MUSCLE_H_

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitbo/sim/state.h"

namespace gaitbo::control {

enum MuscleId : std::size_t { kSOL = 0, kTA, kGAS, kVAS, kHAM, kGLU, kHFL, kNumMuscles };

std::string_view muscle_name(MuscleId id);
MuscleId muscle_from_name(std::string_view name);

// Moment arm of a muscle about one joint. action is the sign of the joint
// torque the muscle produces (+1 flexion / plantarflexion, -1 extension,
// 0 when the joint is not spanned). An optional (angle, arm) table makes the
// arm piecewise linear in the joint angle; otherwise it is constant.
struct MomentArm {
  int action = 0;
  double arm = 0.0;        // m
  double ref_angle = 0.0;  // rad, joint angle at which l_CE = l_opt
  std::vector<std::pair<double, double>> table;

  bool spans() const { return action != 0; }
  double at(double angle) const;
  // Integral of the arm from ref_angle to angle.
  double integral(double angle) const;
};

struct MuscleConstants {
  MuscleId id = kSOL;
  double max_force = 0.0;     // N
  double opt_length = 0.0;    // m
  double max_velocity = 0.0;  // optimal lengths per second
  double width = 0.56;        // force-length width, fraction of l_opt
  double pennation = 0.5;     // fiber length change per tendon excursion
  double passive_start = 1.0; // l_CE / l_opt where the parallel element engages
  double eccentric_ratio = 1.5;
  double curvature = 5.0;     // Hill curvature of the concentric branch
  std::array<MomentArm, 3> arms{};  // hip, knee, ankle
};

// Gaussian-like bell, 1 at l_opt, 0.05 at l_opt (1 +- width).
double force_length(const MuscleConstants& c, double l_ce);
// Hyperbolic; 1 at rest, 0 at -v_max, tending to eccentric_ratio when
// lengthening. Slopes match at zero.
double force_velocity(const MuscleConstants& c, double v_ce);
// d f_v / d v_ce, per m/s.
double force_velocity_slope(const MuscleConstants& c, double v_ce);
double passive_force(const MuscleConstants& c, double l_ce);
// F_max a f_l f_v + passive; never negative.
double contractile_force(const MuscleConstants& c, double activation, double l_ce,
                         double v_ce);

// Exact solution of da/dt = (S - a)/tau over dt.
double step_activation(double activation, double stimulus, double tau, double dt);

inline constexpr double kMinStimulus = 0.01;
inline constexpr double kMaxStimulus = 1.0;
inline constexpr double kActivationTimeConstant = 0.01;

struct Muscle {
  MuscleId id = kSOL;
  double activation = kMinStimulus;
  double l_ce = 0.0;  // m
  double v_ce = 0.0;  // m/s, lengthening positive
  double force = 0.0; // N
  double damping = 0.0;  // dF/dv_ce at the last force update, N s/m

  // Contractile length and velocity from the spanned joints (rigid tendon).
  void update_length(const MuscleConstants& c, const std::array<double, 3>& angles,
                     const std::array<double, 3>& rates);
};

// Advances activation toward the (clamped) stimulus over dt and returns the
// resulting force, which is also stored in m.force.
double muscle_force(Muscle& m, const MuscleConstants& c, double stimulus, double dt,
                    double tau = kActivationTimeConstant);

// Torque of the muscle's current force about a spanned joint. Throws
// ParameterError when the muscle does not span the joint.
double joint_torque(const Muscle& m, const MuscleConstants& c, sim::Joint joint,
                    double angle);

// Per-leg set of muscles with the constants used throughout.
std::array<MuscleConstants, kNumMuscles> default_muscles();

void to_json(nlohmann::json& j, const MuscleConstants& c);
void from_json(const nlohmann::json& j, MuscleConstants& c);

}  // namespace gaitbo::control

#endif  // GAITBO_CONTROL_MUSCLE_H_

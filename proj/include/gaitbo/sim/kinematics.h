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

#ifndef GAITBO_SIM_KINEMATICS_H_
#define GAITBO_SIM_KINEMATICS_H_

#include <array>

#include <Eigen/Core>

#include "gaitbo/sim/model.h"
#include "gaitbo/sim/state.h"

namespace gaitbo::sim {

enum ContactPoint : std::size_t { kHeelL = 0, kToeL, kHeelR, kToeR, kNumContacts };

constexpr ContactPoint heel(Side s) { return s == kLeft ? kHeelL : kHeelR; }
constexpr ContactPoint toe(Side s) { return s == kLeft ? kToeL : kToeR; }

// A body-fixed point: position, velocity, Jacobian d(pos)/dq and the
// velocity-product acceleration Jdot*qd.
struct PointKinematics {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  Eigen::Vector2d bias = Eigen::Vector2d::Zero();
  Eigen::Matrix<double, 2, kDofs> jac = Eigen::Matrix<double, 2, kDofs>::Zero();
};

// Absolute link angles are counter-clockwise from +x. They are linear in q;
// angle_row(link) gives the constant d(angle)/dq.
Eigen::Matrix<double, 1, kDofs> angle_row(LinkId link);

struct Kinematics {
  std::array<double, kNumLinks> angle{};
  std::array<double, kNumLinks> omega{};
  std::array<PointKinematics, kNumLinks> com{};
  std::array<PointKinematics, kNumContacts> contact{};
  std::array<Eigen::Vector2d, 2> knee{};
  std::array<Eigen::Vector2d, 2> ankle{};
  std::array<Eigen::Vector2d, 2> ankle_vel{};
  Eigen::Vector2d hip = Eigen::Vector2d::Zero();
  Eigen::Vector2d hip_vel = Eigen::Vector2d::Zero();
  Eigen::Vector2d com_total = Eigen::Vector2d::Zero();
  Eigen::Vector2d com_total_vel = Eigen::Vector2d::Zero();
};

Kinematics compute_kinematics(const SimState& state, const LinkSet& model);

// Leg angle: angle of the hip-to-ankle vector measured from the backward
// horizontal, so a vertical leg is pi/2 and a leg reaching forward is larger.
double leg_angle(const Kinematics& kin, Side side);
double leg_angle_rate(const Kinematics& kin, Side side);

// Lowest sole point of the foot, world frame.
double foot_bottom(const Kinematics& kin, Side side);

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_KINEMATICS_H_

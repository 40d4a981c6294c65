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

#ifndef GAITBO_SIM_STATE_H_
#define GAITBO_SIM_STATE_H_

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "gaitbo/sim/model.h"

namespace gaitbo::sim {

inline constexpr int kDofs = 9;
using Vec9 = Eigen::Matrix<double, kDofs, 1>;
using Mat9 = Eigen::Matrix<double, kDofs, kDofs>;

enum Side : std::size_t { kLeft = 0, kRight = 1 };
enum Joint : std::size_t { kHip = 0, kKnee = 1, kAnkle = 2 };

// Generalized coordinate layout.
enum Dof : int {
  kX = 0,      // hip (trunk base) x, m
  kY = 1,      // hip y, m
  kPitch = 2,  // trunk pitch, rad, forward lean positive
  kHipL = 3,
  kKneeL = 4,
  kAnkleL = 5,
  kHipR = 6,
  kKneeR = 7,
  kAnkleR = 8,
};

constexpr int joint_dof(Side side, Joint joint) {
  return 3 + 3 * static_cast<int>(side) + static_cast<int>(joint);
}

// Joint torques ordered hipL, kneeL, ankleL, hipR, kneeR, ankleR.
using JointTorques = std::array<double, 6>;

constexpr std::size_t torque_index(Side side, Joint joint) {
  return 3 * static_cast<std::size_t>(side) + static_cast<std::size_t>(joint);
}

struct SimState {
  Vec9 q = Vec9::Zero();
  Vec9 qd = Vec9::Zero();
  std::array<bool, 2> contact{false, false};
  double time = 0.0;

  double joint(Side s, Joint j) const { return q[joint_dof(s, j)]; }
  double joint_rate(Side s, Joint j) const { return qd[joint_dof(s, j)]; }
  bool is_finite() const { return q.allFinite() && qd.allFinite() && std::isfinite(time); }

  bool operator==(const SimState& o) const {
    return q == o.q && qd == o.qd && contact == o.contact && time == o.time;
  }
};

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_STATE_H_

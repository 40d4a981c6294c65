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

#ifndef GAITBO_SIM_DYNAMICS_H_
#define GAITBO_SIM_DYNAMICS_H_

#include <array>

#include "gaitbo/sim/kinematics.h"
#include "gaitbo/sim/model.h"
#include "gaitbo/sim/state.h"
#include "gaitbo/sim/terrain.h"

namespace gaitbo::sim {

inline constexpr double kDefaultDt = 0.001;
inline constexpr double kMaxDt = 0.002;

struct ContactForce {
  bool active = false;
  double depth = 0.0;       // m, penetration below the ground surface
  double normal = 0.0;      // N, >= 0
  double tangential = 0.0;  // N, along +x
};

struct StepReport {
  std::array<ContactForce, kNumContacts> contacts{};
};

// Ground reaction at one point for the given penetration depth (> 0) and
// point velocity.
ContactForce contact_force(const ContactParams& params, double depth,
                           const Eigen::Vector2d& vel);

// One step of semi-implicit Euler: velocities are updated first, positions
// from the new velocities. Contact and joint-limit forces enter through their
// linearization (M + dt D + dt^2 K) dv = dt (f - dt K v), so the stiff ground
// stays stable at millisecond steps. external is an optional generalized
// force added to the right-hand side. joint_damping, when given, is the
// actuator's -d(torque)/d(joint rate) per joint (>= 0); it is treated
// implicitly like the limit dampers. Throws ParameterError for dt outside
// (0, kMaxDt], non-finite torques or negative damping, and SimulationFault if
// the result is not finite.
SimState step_dynamics(const SimState& state, const JointTorques& torques,
                       const LinkSet& model, const PhysicsParams& physics,
                       const GroundProfile& ground, double dt,
                       StepReport* report = nullptr, const Vec9* external = nullptr,
                       const JointTorques* joint_damping = nullptr);

// Kinetic plus gravitational potential energy.
double mechanical_energy(const SimState& state, const LinkSet& model, double gravity);

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_DYNAMICS_H_

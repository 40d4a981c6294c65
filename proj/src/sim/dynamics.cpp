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

#include "gaitbo/sim/dynamics.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "gaitbo/errors.h"

namespace gaitbo::sim {

ContactForce contact_force(const ContactParams& params, double depth,
                           const Eigen::Vector2d& vel) {
  ContactForce f;
  if (!(depth > 0.0)) return f;
  f.active = true;
  f.depth = depth;
  const double ramp = std::min(1.0, depth / params.damping_depth);
  f.normal = std::max(0.0, params.stiffness * depth - params.damping * ramp * vel.y());
  f.tangential = -params.friction * f.normal * std::tanh(vel.x() / params.slip_velocity);
  return f;
}

namespace {

struct LimitTerm {
  double torque = 0.0;
  double stiffness = 0.0;
  double damping = 0.0;
};

LimitTerm joint_limit(const JointLimit& lim, const JointLimits& p, double angle, double rate) {
  LimitTerm t;
  if (angle < lim.lower) {
    t.torque = p.stiffness * (lim.lower - angle) - p.damping * rate;
    t.stiffness = p.stiffness;
    t.damping = p.damping;
  } else if (angle > lim.upper) {
    t.torque = p.stiffness * (lim.upper - angle) - p.damping * rate;
    t.stiffness = p.stiffness;
    t.damping = p.damping;
  }
  return t;
}

}  // namespace

SimState step_dynamics(const SimState& state, const JointTorques& torques,
                       const LinkSet& model, const PhysicsParams& physics,
                       const GroundProfile& ground, double dt, StepReport* report,
                       const Vec9* external, const JointTorques* joint_damping) {
  if (!(dt > 0.0 && dt <= kMaxDt)) throw ParameterError("dt must lie in (0, 2 ms]");
  for (double t : torques) {
    if (!std::isfinite(t)) throw ParameterError("joint torque is not finite");
  }

  const Kinematics kin = compute_kinematics(state, model);
  const Eigen::Vector2d gravity{0.0, -physics.gravity};

  Mat9 mass = Mat9::Zero();
  Vec9 force = Vec9::Zero();
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const Link& link = model.links[i];
    const PointKinematics& c = kin.com[i];
    const auto row = angle_row(static_cast<LinkId>(i));
    mass.noalias() += link.mass * c.jac.transpose() * c.jac;
    mass.noalias() += link.inertia * row.transpose() * row;
    force.noalias() += link.mass * c.jac.transpose() * (gravity - c.bias);
  }

  for (Side s : {kLeft, kRight}) {
    for (Joint j : {kHip, kKnee, kAnkle}) {
      force[joint_dof(s, j)] += torques[torque_index(s, j)];
    }
  }
  if (external != nullptr) force += *external;
  if (joint_damping != nullptr) {
    for (double c : *joint_damping) {
      if (!(c >= 0.0 && std::isfinite(c))) throw ParameterError("joint damping must be finite and >= 0");
    }
  }

  // Implicit terms: A = M + dt D + dt^2 K.
  Mat9 implicit = mass;
  Vec9 stiff_vel = Vec9::Zero();  // K v

  const JointLimits& lims = physics.limits;
  for (Side s : {kLeft, kRight}) {
    const std::array<const JointLimit*, 3> per_joint{&lims.hip, &lims.knee, &lims.ankle};
    for (Joint j : {kHip, kKnee, kAnkle}) {
      const int d = joint_dof(s, j);
      const LimitTerm t = joint_limit(*per_joint[j], lims, state.q[d], state.qd[d]);
      if (t.stiffness == 0.0) continue;
      force[d] += t.torque;
      implicit(d, d) += dt * t.damping + dt * dt * t.stiffness;
      stiff_vel[d] += t.stiffness * state.qd[d];
    }
  }

  if (joint_damping != nullptr) {
    for (Side s : {kLeft, kRight}) {
      for (Joint j : {kHip, kKnee, kAnkle}) {
        const int d = joint_dof(s, j);
        implicit(d, d) += dt * (*joint_damping)[torque_index(s, j)];
      }
    }
  }

  SimState next = state;
  next.contact = {false, false};
  const ContactParams& cp = physics.contact;
  for (std::size_t c = 0; c < kNumContacts; ++c) {
    const PointKinematics& p = kin.contact[c];
    const double depth = ground_height(ground, p.pos.x()) - p.pos.y();
    const ContactForce f = contact_force(cp, depth, p.vel);
    if (report != nullptr) report->contacts[c] = f;
    if (!f.active) continue;
    next.contact[c / 2] = true;
    force.noalias() += p.jac.transpose() * Eigen::Vector2d(f.tangential, f.normal);

    const double ramp = std::min(1.0, depth / cp.damping_depth);
    const double normal_damping = f.normal > 0.0 ? cp.damping * ramp : 0.0;
    const double normal_stiffness = f.normal > 0.0 ? cp.stiffness : 0.0;
    // Secant slope F_t / v: the friction acts as an implicit viscous term, so
    // a sliding point can stop within a step but never reverses.
    const double u = p.vel.x() / cp.slip_velocity;
    const double secant = std::abs(u) < 1e-8 ? 1.0 : std::tanh(u) / u;
    const double slip_damping = cp.friction * f.normal * secant / cp.slip_velocity;
    const auto jx = p.jac.row(0);
    const auto jy = p.jac.row(1);
    implicit.noalias() += (dt * slip_damping) * jx.transpose() * jx;
    implicit.noalias() += (dt * normal_damping + dt * dt * normal_stiffness) * jy.transpose() * jy;
    stiff_vel.noalias() += normal_stiffness * jy.transpose() * (jy * state.qd);
  }

  const Vec9 rhs = dt * (force - dt * stiff_vel);
  const Vec9 dv = implicit.llt().solve(rhs);
  next.qd = state.qd + dv;
  next.q = state.q + dt * next.qd;
  next.time = state.time + dt;
  if (!next.is_finite()) throw SimulationFault("non-finite state at t = " + std::to_string(next.time));
  return next;
}

double mechanical_energy(const SimState& state, const LinkSet& model, double gravity) {
  const Kinematics kin = compute_kinematics(state, model);
  double e = 0.0;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const Link& l = model.links[i];
    e += 0.5 * l.mass * kin.com[i].vel.squaredNorm();
    e += 0.5 * l.inertia * kin.omega[i] * kin.omega[i];
    e += l.mass * gravity * kin.com[i].pos.y();
  }
  return e;
}

}  // namespace gaitbo::sim

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

#include "gaitbo/sim/kinematics.h"

#include <cmath>
#include <numbers>

namespace gaitbo::sim {

namespace {

using Row = Eigen::Matrix<double, 1, kDofs>;

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

Eigen::Vector2d unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Extends a point by a vector r fixed in a link rotating at omega.
void advance(PointKinematics& p, const Eigen::Vector2d& r, double omega, const Row& row) {
  const Eigen::Vector2d pr = perp(r);
  p.pos += r;
  p.vel += omega * pr;
  p.bias -= omega * omega * r;
  p.jac += pr * row;
}

constexpr LinkId thigh(Side s) { return s == kLeft ? kThighL : kThighR; }
constexpr LinkId shank(Side s) { return s == kLeft ? kShankL : kShankR; }
constexpr LinkId foot(Side s) { return s == kLeft ? kFootL : kFootR; }

}  // namespace

Row angle_row(LinkId link) {
  Row r = Row::Zero();
  r[kPitch] = -1.0;
  if (link == kTrunk) return r;
  const Side side = (link == kThighL || link == kShankL || link == kFootL) ? kLeft : kRight;
  r[joint_dof(side, kHip)] = 1.0;
  if (link == thigh(side)) return r;
  r[joint_dof(side, kKnee)] = -1.0;
  if (link == shank(side)) return r;
  r[joint_dof(side, kAnkle)] = -1.0;
  return r;
}

Kinematics compute_kinematics(const SimState& state, const LinkSet& model) {
  using std::numbers::pi;
  Kinematics k;
  const Vec9& q = state.q;
  const Vec9& qd = state.qd;

  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const Row row = angle_row(static_cast<LinkId>(i));
    k.omega[i] = row.dot(qd);
  }
  k.angle[kTrunk] = 0.5 * pi - q[kPitch];
  for (Side s : {kLeft, kRight}) {
    k.angle[thigh(s)] = q[joint_dof(s, kHip)] - q[kPitch] - 0.5 * pi;
    k.angle[shank(s)] = k.angle[thigh(s)] - q[joint_dof(s, kKnee)];
    k.angle[foot(s)] = k.angle[shank(s)] + 0.5 * pi - q[joint_dof(s, kAnkle)];
  }

  PointKinematics hip;
  hip.pos = {q[kX], q[kY]};
  hip.vel = {qd[kX], qd[kY]};
  hip.jac(0, kX) = 1.0;
  hip.jac(1, kY) = 1.0;
  k.hip = hip.pos;
  k.hip_vel = hip.vel;

  auto extend = [&](const PointKinematics& from, LinkId link, const Eigen::Vector2d& r) {
    PointKinematics p = from;
    advance(p, r, k.omega[link], angle_row(link));
    return p;
  };

  k.com[kTrunk] = extend(hip, kTrunk, model[kTrunk].com_offset * unit(k.angle[kTrunk]));
  for (Side s : {kLeft, kRight}) {
    const LinkId th = thigh(s), sh = shank(s), ft = foot(s);
    const Eigen::Vector2d e_th = unit(k.angle[th]);
    const Eigen::Vector2d e_sh = unit(k.angle[sh]);
    const Eigen::Vector2d e_ft = unit(k.angle[ft]);
    const Eigen::Vector2d n_ft{e_ft.y(), -e_ft.x()};  // sole normal, pointing down

    k.com[th] = extend(hip, th, model[th].com_offset * e_th);
    const PointKinematics knee = extend(hip, th, model[th].length * e_th);
    k.com[sh] = extend(knee, sh, model[sh].com_offset * e_sh);
    const PointKinematics ankle = extend(knee, sh, model[sh].length * e_sh);
    k.com[ft] = extend(ankle, ft, model[ft].com_offset * e_ft);
    const double depth = model.foot.sole_depth;
    k.contact[heel(s)] = extend(ankle, ft, -model.foot.heel_offset * e_ft + depth * n_ft);
    k.contact[toe(s)] = extend(ankle, ft, model[ft].length * e_ft + depth * n_ft);
    k.knee[s] = knee.pos;
    k.ankle[s] = ankle.pos;
    k.ankle_vel[s] = ankle.vel;
  }

  double mass = 0.0;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    mass += model.links[i].mass;
    k.com_total += model.links[i].mass * k.com[i].pos;
    k.com_total_vel += model.links[i].mass * k.com[i].vel;
  }
  k.com_total /= mass;
  k.com_total_vel /= mass;
  return k;
}

double leg_angle(const Kinematics& kin, Side side) {
  const Eigen::Vector2d d = kin.hip - kin.ankle[side];
  return std::atan2(d.y(), d.x());
}

double leg_angle_rate(const Kinematics& kin, Side side) {
  const Eigen::Vector2d d = kin.hip - kin.ankle[side];
  const Eigen::Vector2d v = kin.hip_vel - kin.ankle_vel[side];
  return (d.x() * v.y() - d.y() * v.x()) / d.squaredNorm();
}

double foot_bottom(const Kinematics& kin, Side side) {
  return std::min(kin.contact[heel(side)].pos.y(), kin.contact[toe(side)].pos.y());
}

}  // namespace gaitbo::sim

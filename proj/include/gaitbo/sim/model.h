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

#ifndef GAITBO_SIM_MODEL_H_
#define GAITBO_SIM_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gaitbo::sim {

// Link order is also the order of disturbance draws.
enum LinkId : std::size_t {
  kTrunk = 0,
  kThighL,
  kShankL,
  kFootL,
  kThighR,
  kShankR,
  kFootR,
  kNumLinks
};

std::string_view link_name(LinkId id);

struct Link {
  double mass = 0.0;        // kg
  double inertia = 0.0;     // kg m^2 about the link CoM
  double length = 0.0;      // m, proximal joint to distal joint (ankle to toe for feet)
  double com_offset = 0.0;  // m, from the proximal joint along the link axis

  bool operator==(const Link&) const = default;
};

// Foot contact geometry in the foot frame. The sole lies sole_depth below the
// ankle; the heel point is heel_offset behind the ankle and the toe point is
// the foot length ahead of it.
struct FootGeometry {
  double heel_offset = 0.04;
  double sole_depth = 0.05;

  bool operator==(const FootGeometry&) const = default;
};

struct LinkSet {
  std::array<Link, kNumLinks> links{};
  FootGeometry foot{};

  const Link& operator[](LinkId id) const { return links[id]; }
  Link& operator[](LinkId id) { return links[id]; }

  double total_mass() const;
  // Throws ParameterError on non-positive mass/inertia/length or a CoM offset
  // outside [0, length].
  void validate() const;

  bool operator==(const LinkSet&) const = default;
};

// 80 kg anthropomorphic model: HAT 53.5 kg, thigh 8.5 kg, shank 3.5 kg,
// foot 1.25 kg; 0.46 m leg segments.
LinkSet default_link_set();

struct LinkDisturbance {
  double mass_scale = 1.0;
  double inertia_scale = 1.0;
  double com_shift = 0.0;  // m, along the link axis

  bool operator==(const LinkDisturbance&) const = default;
};

struct Disturbance {
  std::array<LinkDisturbance, kNumLinks> links{};
  std::uint64_t seed = 0;
  double magnitude = 0.0;

  bool is_identity() const;
  bool operator==(const Disturbance&) const = default;
};

inline constexpr double kMaxDisturbance = 0.15;

// Per link, in LinkId order, three uniform draws u from mt19937_64(seed):
// mass scale 1 + m(2u-1), inertia scale 1 + m(2u-1), CoM shift m(2u-1) L/2.
Disturbance sample_disturbance(std::uint64_t seed, double magnitude = kMaxDisturbance,
                               const LinkSet& base = default_link_set());

// Applies scale factors and CoM shifts; shifted offsets are clamped into
// [0, length].
LinkSet build_model(const LinkSet& base, const Disturbance& dist);

struct ContactParams {
  double stiffness = 80000.0;    // N/m per contact point
  double damping = 5000.0;       // N s/m per contact point at full depth
  double damping_depth = 0.002;  // m, damping ramps in over this depth
  double friction = 0.9;
  double slip_velocity = 0.01;   // m/s, Coulomb regularization

  bool operator==(const ContactParams&) const = default;
};

struct JointLimit {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const JointLimit&) const = default;
};

// Joint angles: hip flexion, knee flexion, ankle plantarflexion positive.
struct JointLimits {
  JointLimit hip{-0.8, 2.0};
  JointLimit knee{0.0, 2.4};
  JointLimit ankle{-0.6, 0.8};
  double stiffness = 2000.0;  // N m / rad
  double damping = 40.0;      // N m s / rad

  bool operator==(const JointLimits&) const = default;
};

struct PhysicsParams {
  double gravity = 9.81;
  ContactParams contact{};
  JointLimits limits{};

  bool operator==(const PhysicsParams&) const = default;
};

void to_json(nlohmann::json& j, const Link& l);
void from_json(const nlohmann::json& j, Link& l);
void to_json(nlohmann::json& j, const LinkSet& s);
void from_json(const nlohmann::json& j, LinkSet& s);
void to_json(nlohmann::json& j, const Disturbance& d);
void from_json(const nlohmann::json& j, Disturbance& d);
void to_json(nlohmann::json& j, const PhysicsParams& p);
void from_json(const nlohmann::json& j, PhysicsParams& p);

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_MODEL_H_

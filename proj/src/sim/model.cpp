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

#include "gaitbo/sim/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitbo/errors.h"
#include "gaitbo/random.h"

namespace gaitbo::sim {

std::string_view link_name(LinkId id) {
  static constexpr std::array<std::string_view, kNumLinks> kNames = {
      "trunk", "thigh_l", "shank_l", "foot_l", "thigh_r", "shank_r", "foot_r"};
  return kNames.at(id);
}

double LinkSet::total_mass() const {
  double m = 0.0;
  for (const Link& l : links) m += l.mass;
  return m;
}

void LinkSet::validate() const {
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const Link& l = links[i];
    const std::string name(link_name(static_cast<LinkId>(i)));
    if (!(l.mass > 0.0) || !(l.inertia > 0.0) || !(l.length > 0.0)) {
      throw ParameterError("link " + name + ": mass, inertia and length must be positive");
    }
    if (!(l.com_offset >= 0.0 && l.com_offset <= l.length)) {
      throw ParameterError("link " + name + ": CoM offset outside [0, length]");
    }
  }
  if (!(foot.heel_offset >= 0.0) || !(foot.sole_depth >= 0.0)) {
    throw ParameterError("foot geometry must be nonnegative");
  }
}

LinkSet default_link_set() {
  LinkSet s;
  const Link thigh{8.5, 0.15, 0.46, 0.20};
  const Link shank{3.5, 0.05, 0.46, 0.20};
  const Link foot{1.25, 0.005, 0.16, 0.05};
  s[kTrunk] = {53.5, 3.0, 0.80, 0.35};
  s[kThighL] = s[kThighR] = thigh;
  s[kShankL] = s[kShankR] = shank;
  s[kFootL] = s[kFootR] = foot;
  return s;
}

bool Disturbance::is_identity() const {
  return std::all_of(links.begin(), links.end(),
                     [](const LinkDisturbance& d) { return d == LinkDisturbance{}; });
}

Disturbance sample_disturbance(std::uint64_t seed, double magnitude, const LinkSet& base) {
  if (!(magnitude >= 0.0 && magnitude <= kMaxDisturbance)) {
    throw ParameterError("disturbance magnitude must lie in [0, 0.15]");
  }
  Disturbance d;
  d.seed = seed;
  d.magnitude = magnitude;
  if (magnitude == 0.0) return d;
  Rng rng(seed);
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    LinkDisturbance& ld = d.links[i];
    ld.mass_scale = 1.0 + magnitude * (2.0 * uniform01(rng) - 1.0);
    ld.inertia_scale = 1.0 + magnitude * (2.0 * uniform01(rng) - 1.0);
    ld.com_shift = magnitude * (2.0 * uniform01(rng) - 1.0) * 0.5 * base.links[i].length;
  }
  return d;
}

LinkSet build_model(const LinkSet& base, const Disturbance& dist) {
  LinkSet out = base;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    Link& l = out.links[i];
    const LinkDisturbance& d = dist.links[i];
    l.mass *= d.mass_scale;
    l.inertia *= d.inertia_scale;
    l.com_offset = std::clamp(l.com_offset + d.com_shift, 0.0, l.length);
  }
  return out;
}

void to_json(nlohmann::json& j, const Link& l) {
  j = {{"mass", l.mass}, {"inertia", l.inertia}, {"length", l.length},
       {"com_offset", l.com_offset}};
}

void from_json(const nlohmann::json& j, Link& l) {
  l.mass = j.at("mass").get<double>();
  l.inertia = j.at("inertia").get<double>();
  l.length = j.at("length").get<double>();
  l.com_offset = j.at("com_offset").get<double>();
}

void to_json(nlohmann::json& j, const LinkSet& s) {
  j = nlohmann::json::object();
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    j["links"][std::string(link_name(static_cast<LinkId>(i)))] = s.links[i];
  }
  j["foot"] = {{"heel_offset", s.foot.heel_offset}, {"sole_depth", s.foot.sole_depth}};
}

void from_json(const nlohmann::json& j, LinkSet& s) {
  const auto& links = j.at("links");
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    s.links[i] = links.at(std::string(link_name(static_cast<LinkId>(i)))).get<Link>();
  }
  if (j.contains("foot")) {
    s.foot.heel_offset = j["foot"].at("heel_offset").get<double>();
    s.foot.sole_depth = j["foot"].at("sole_depth").get<double>();
  }
  s.validate();
}

void to_json(nlohmann::json& j, const Disturbance& d) {
  j = {{"seed", d.seed}, {"magnitude", d.magnitude}};
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const LinkDisturbance& l = d.links[i];
    j["links"][std::string(link_name(static_cast<LinkId>(i)))] = {
        {"mass_scale", l.mass_scale},
        {"inertia_scale", l.inertia_scale},
        {"com_shift", l.com_shift}};
  }
}

void from_json(const nlohmann::json& j, Disturbance& d) {
  d.seed = j.at("seed").get<std::uint64_t>();
  d.magnitude = j.at("magnitude").get<double>();
  const auto& links = j.at("links");
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const auto& l = links.at(std::string(link_name(static_cast<LinkId>(i))));
    d.links[i].mass_scale = l.at("mass_scale").get<double>();
    d.links[i].inertia_scale = l.at("inertia_scale").get<double>();
    d.links[i].com_shift = l.at("com_shift").get<double>();
  }
}

namespace {

nlohmann::json limit_json(const JointLimit& l) { return {l.lower, l.upper}; }

JointLimit limit_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const PhysicsParams& p) {
  const ContactParams& c = p.contact;
  j = {{"gravity", p.gravity},
       {"contact",
        {{"stiffness", c.stiffness},
         {"damping", c.damping},
         {"damping_depth", c.damping_depth},
         {"friction", c.friction},
         {"slip_velocity", c.slip_velocity}}},
       {"joint_limits",
        {{"hip", limit_json(p.limits.hip)},
         {"knee", limit_json(p.limits.knee)},
         {"ankle", limit_json(p.limits.ankle)},
         {"stiffness", p.limits.stiffness},
         {"damping", p.limits.damping}}}};
}

void from_json(const nlohmann::json& j, PhysicsParams& p) {
  p = PhysicsParams{};
  p.gravity = j.value("gravity", p.gravity);
  if (j.contains("contact")) {
    const auto& c = j["contact"];
    p.contact.stiffness = c.value("stiffness", p.contact.stiffness);
    p.contact.damping = c.value("damping", p.contact.damping);
    p.contact.damping_depth = c.value("damping_depth", p.contact.damping_depth);
    p.contact.friction = c.value("friction", p.contact.friction);
    p.contact.slip_velocity = c.value("slip_velocity", p.contact.slip_velocity);
  }
  if (j.contains("joint_limits")) {
    const auto& l = j["joint_limits"];
    if (l.contains("hip")) p.limits.hip = limit_from(l["hip"]);
    if (l.contains("knee")) p.limits.knee = limit_from(l["knee"]);
    if (l.contains("ankle")) p.limits.ankle = limit_from(l["ankle"]);
    p.limits.stiffness = l.value("stiffness", p.limits.stiffness);
    p.limits.damping = l.value("damping", p.limits.damping);
  }
}

}  // namespace gaitbo::sim

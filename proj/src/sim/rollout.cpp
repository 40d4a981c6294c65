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

#include "gaitbo/sim/rollout.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/LU>

#include "gaitbo/errors.h"
#include "gaitbo/sim/kinematics.h"

namespace gaitbo::sim {

SimConfig default_sim_config() { return SimConfig{}; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kCompleted:
      return "completed";
    case Termination::kFell:
      return "fell";
    case Termination::kFault:
      return "fault";
  }
  return "completed";
}

void to_json(nlohmann::json& j, const SimConfig& c) {
  const InitialConditions& i = c.initial;
  j = {{"physics", c.physics},
       {"controller", c.controller},
       {"initial",
        {{"speed", i.speed},
         {"pitch", i.pitch},
         {"stance_thigh", i.stance_thigh},
         {"stance_knee", i.stance_knee},
         {"swing_thigh", i.swing_thigh},
         {"swing_knee", i.swing_knee},
         {"swing_ankle", i.swing_ankle},
         {"penetration", i.penetration}}},
       {"fall", {{"height_fraction", c.fall.height_fraction}, {"max_pitch", c.fall.max_pitch}}},
       {"dt", c.dt},
       {"sample_interval", c.sample_interval},
       {"debounce", c.debounce}};
}

void from_json(const nlohmann::json& j, SimConfig& c) {
  c = SimConfig{};
  if (j.contains("physics")) c.physics = j["physics"].get<PhysicsParams>();
  if (j.contains("controller")) c.controller = j["controller"].get<control::ControllerConfig>();
  if (j.contains("initial")) {
    const auto& i = j["initial"];
    InitialConditions& o = c.initial;
    o.speed = i.value("speed", o.speed);
    o.pitch = i.value("pitch", o.pitch);
    o.stance_thigh = i.value("stance_thigh", o.stance_thigh);
    o.stance_knee = i.value("stance_knee", o.stance_knee);
    o.swing_thigh = i.value("swing_thigh", o.swing_thigh);
    o.swing_knee = i.value("swing_knee", o.swing_knee);
    o.swing_ankle = i.value("swing_ankle", o.swing_ankle);
    o.penetration = i.value("penetration", o.penetration);
  }
  if (j.contains("fall")) {
    c.fall.height_fraction = j["fall"].value("height_fraction", c.fall.height_fraction);
    c.fall.max_pitch = j["fall"].value("max_pitch", c.fall.max_pitch);
  }
  c.dt = j.value("dt", c.dt);
  c.sample_interval = j.value("sample_interval", c.sample_interval);
  c.debounce = j.value("debounce", c.debounce);
  if (!(c.dt > 0.0 && c.dt <= kMaxDt)) throw ParameterError("dt must lie in (0, 2 ms]");
  if (!(c.sample_interval >= c.dt)) throw ParameterError("sample interval shorter than dt");
}

nlohmann::json sim_fingerprint(const LinkSet& model, const SimConfig& config) {
  return {{"model", model}, {"sim", config}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t sim_config_hash(const LinkSet& model, const SimConfig& config) {
  return fnv1a64(sim_fingerprint(model, config).dump());
}

double standing_trunk_height(const LinkSet& model) {
  return model.foot.sole_depth + model[kShankL].length + model[kThighL].length +
         model[kTrunk].com_offset;
}

SimState initial_state(const LinkSet& model, const SimConfig& config, const GroundProfile& ground) {
  const InitialConditions& ic = config.initial;
  SimState s;
  s.q[kPitch] = ic.pitch;
  // Stance foot flat: ankle = hip - pitch - knee in these coordinates.
  s.q[kHipL] = ic.stance_thigh + ic.pitch;
  s.q[kKneeL] = ic.stance_knee;
  s.q[kAnkleL] = s.q[kHipL] - ic.pitch - ic.stance_knee;
  s.q[kHipR] = ic.swing_thigh + ic.pitch;
  s.q[kKneeR] = ic.swing_knee;
  s.q[kAnkleR] = ic.swing_ankle;

  Kinematics kin = compute_kinematics(s, model);
  const double sole = std::min(kin.contact[kHeelL].pos.y(), kin.contact[kToeL].pos.y());
  const double ground_y = std::max(ground_height(ground, kin.contact[kHeelL].pos.x()),
                                   ground_height(ground, kin.contact[kToeL].pos.x()));
  s.q[kY] += ground_y - sole - ic.penetration;
  kin = compute_kinematics(s, model);

  // Hip moves on a circle about the stance ankle with forward speed ic.speed;
  // left-leg joint rates keep the stance foot stationary and flat.
  const Eigen::Vector2d r = kin.hip - kin.ankle[kLeft];
  const double omega = -ic.speed / r.y();
  s.qd[kX] = ic.speed;
  s.qd[kY] = omega * r.x();
  // Ankle velocity and foot rate are linear in the left joint rates.
  Eigen::Matrix3d a;
  SimState probe = s;
  auto ankle_vel = [&](const Vec9& qd) {
    probe.qd = qd;
    const Kinematics k = compute_kinematics(probe, model);
    return Eigen::Vector3d(k.ankle_vel[kLeft].x(), k.ankle_vel[kLeft].y(), k.omega[kFootL]);
  };
  Vec9 base = s.qd;
  const Eigen::Vector3d b0 = ankle_vel(base);
  for (int c = 0; c < 3; ++c) {
    Vec9 e = base;
    e[kHipL + c] += 1.0;
    a.col(c) = ankle_vel(e) - b0;
  }
  const Eigen::Vector3d rates = a.fullPivLu().solve(-b0);
  for (int c = 0; c < 3; ++c) s.qd[kHipL + c] = rates[c];
  s.contact = {true, false};
  return s;
}

namespace {

struct EdgeDetector {
  bool confirmed = false;
  bool pending = false;
  double pending_time = 0.0;
  Sample pending_snapshot;
};

Sample make_sample(const SimState& s, const Kinematics& kin) {
  Sample out;
  out.time = s.time;
  out.q = s.q;
  out.qd = s.qd;
  out.contact = s.contact;
  out.com = kin.com_total;
  return out;
}

}  // namespace

Trajectory rollout(const control::PolicyParams& params, const LinkSet& model,
                   const GroundProfile& ground, double duration, const SimConfig& config,
                   const RolloutOptions& options) {
  if (!(duration > 0.0)) throw ParameterError("rollout duration must be positive");
  const double dt = config.dt;
  Trajectory traj;
  traj.total_mass = model.total_mass();
  traj.gravity = config.physics.gravity;
  traj.min_normal_force = std::numeric_limits<double>::infinity();

  SimState state = initial_state(model, config, ground);
  Kinematics kin = compute_kinematics(state, model);
  control::Controller controller(config.controller, params, dt);
  controller.reset(state, kin, ground);

  const auto steps = static_cast<long>(std::llround(duration / dt));
  const long sample_every = std::max(1L, std::lround(config.sample_interval / dt));
  const double fall_height = config.fall.height_fraction * standing_trunk_height(model);

  std::array<EdgeDetector, 2> edges;
  for (Side side : {kLeft, kRight}) edges[side].confirmed = state.contact[side];
  traj.samples.push_back(make_sample(state, kin));

  StepReport report;
  for (long step = 0; step < steps; ++step) {
    JointTorques torques{};
    try {
      torques = controller.tick(state, kin, ground);
      if (options.record_torques) traj.torques.push_back(torques);
      state = step_dynamics(state, torques, model, config.physics, ground, dt, &report, nullptr,
                            &controller.damping());
    } catch (const SimulationFault&) {
      traj.termination = Termination::kFault;
      break;
    } catch (const ParameterError&) {
      // Non-finite torques from a diverging controller.
      traj.termination = Termination::kFault;
      break;
    }
    for (const ContactForce& c : report.contacts) {
      if (!c.active) continue;
      traj.min_normal_force = std::min(traj.min_normal_force, c.normal);
      traj.max_penetration = std::max(traj.max_penetration, c.depth);
    }
    kin = compute_kinematics(state, model);

    for (Side side : {kLeft, kRight}) {
      EdgeDetector& e = edges[side];
      const bool raw = state.contact[side];
      if (raw != e.confirmed) {
        if (!e.pending) {
          e.pending = true;
          e.pending_time = state.time;
          e.pending_snapshot = make_sample(state, kin);
        }
        if (state.time - e.pending_time >= config.debounce - 0.5 * dt) {
          e.confirmed = raw;
          e.pending = false;
          traj.events.push_back({e.pending_time, side,
                                 raw ? EventKind::kHeelStrike : EventKind::kToeOff,
                                 e.pending_snapshot});
        }
      } else {
        e.pending = false;
      }
    }

    if ((step + 1) % sample_every == 0) traj.samples.push_back(make_sample(state, kin));

    const double trunk_h =
        kin.com[kTrunk].pos.y() - ground_height(ground, kin.com[kTrunk].pos.x());
    if (trunk_h < fall_height || std::abs(state.q[kPitch]) > config.fall.max_pitch) {
      traj.termination = Termination::kFell;
      break;
    }
  }
  std::sort(traj.events.begin(), traj.events.end(),
            [](const StepEvent& a, const StepEvent& b) { return a.time < b.time; });
  traj.end_time = state.time;
  traj.final_hip_x = state.q[kX];
  traj.x_fall = traj.fell() ? state.q[kX] : 0.0;
  traj.effort = controller.effort();
  if (!std::isfinite(traj.min_normal_force)) traj.min_normal_force = 0.0;
  if (traj.samples.back().time != state.time && state.is_finite()) {
    traj.samples.push_back(make_sample(state, kin));
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  static const char* kNames[] = {"x",     "y",      "pitch",  "hip_l", "knee_l",
                                 "ankle_l", "hip_r", "knee_r", "ankle_r"};
  out << "time";
  for (const char* n : kNames) out << ',' << n;
  for (const char* n : kNames) out << ",d_" << n;
  out << ",contact_l,contact_r,com_x,com_y\n";
  out.precision(10);
  for (const Sample& s : traj.samples) {
    out << s.time;
    for (int i = 0; i < kDofs; ++i) out << ',' << s.q[i];
    for (int i = 0; i < kDofs; ++i) out << ',' << s.qd[i];
    out << ',' << s.contact[0] << ',' << s.contact[1] << ',' << s.com.x() << ',' << s.com.y()
        << '\n';
  }
  out << "\n# events\nevent_time,side,kind\n";
  for (const StepEvent& e : traj.events) {
    out << e.time << ',' << (e.side == kLeft ? "left" : "right") << ','
        << (e.kind == EventKind::kHeelStrike ? "heel_strike" : "toe_off") << '\n';
  }
  out << "\n# termination\n" << to_string(traj.termination) << ',' << traj.end_time << ','
      << traj.x_fall << '\n';
}

}  // namespace gaitbo::sim

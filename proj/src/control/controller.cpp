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

#include "gaitbo/control/controller.h"

#include <cmath>
#include <string>

#include "gaitbo/errors.h"

namespace gaitbo::control {

using sim::Side;

ControllerConfig default_controller_config() { return ControllerConfig{}; }

void to_json(nlohmann::json& j, const ControllerConfig& c) {
  j = nlohmann::json::object();
  for (std::size_t m = 0; m < kNumMuscles; ++m) {
    j["muscles"][std::string(muscle_name(static_cast<MuscleId>(m)))] = c.muscles[m];
  }
  j["stance"] = c.stance;
  j["swing"] = c.swing;
  j["bounds"] = c.bounds;
  j["activation_time_constant"] = c.activation_time_constant;
}

void from_json(const nlohmann::json& j, ControllerConfig& c) {
  c = ControllerConfig{};
  if (j.contains("muscles")) {
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      const auto id = static_cast<MuscleId>(m);
      c.muscles[m] = j["muscles"].at(std::string(muscle_name(id))).get<MuscleConstants>();
      c.muscles[m].id = id;
    }
  }
  if (j.contains("stance")) c.stance = j["stance"].get<StanceConfig>();
  if (j.contains("swing")) c.swing = j["swing"].get<SwingConfig>();
  if (j.contains("bounds")) c.bounds = j["bounds"].get<ParamBounds>();
  c.activation_time_constant = j.value("activation_time_constant", c.activation_time_constant);
  if (!(c.activation_time_constant > 0.0)) {
    throw ParameterError("activation time constant must be positive");
  }
}

Controller::Controller(const ControllerConfig& config, const PolicyParams& params, double dt)
    : config_(config),
      params_(params),
      dt_(dt),
      history_(max_delay_ticks(config.stance, dt) + 1) {
  for (auto& leg : muscles_) {
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      leg[m].id = static_cast<MuscleId>(m);
      leg[m].activation = config.stance.pre_stimulus[m];
    }
  }
  for (auto& leg : stimuli_) leg = config.stance.pre_stimulus;
}

void Controller::update_muscle_lengths(const sim::SimState& s) {
  for (Side side : {sim::kLeft, sim::kRight}) {
    const std::array<double, 3> angles{s.joint(side, sim::kHip), s.joint(side, sim::kKnee),
                                       s.joint(side, sim::kAnkle)};
    const std::array<double, 3> rates{s.joint_rate(side, sim::kHip),
                                      s.joint_rate(side, sim::kKnee),
                                      s.joint_rate(side, sim::kAnkle)};
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      muscles_[side][m].update_length(config_.muscles[m], angles, rates);
    }
  }
}

SensorSample Controller::sense(const sim::SimState& s) const {
  SensorSample out;
  for (Side side : {sim::kLeft, sim::kRight}) {
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      const Muscle& mu = muscles_[side][m];
      const MuscleConstants& c = config_.muscles[m];
      out.force[side][m] = contractile_force(c, mu.activation, mu.l_ce, mu.v_ce) / c.max_force;
      out.length[side][m] = mu.l_ce / c.opt_length;
    }
    out.knee[side] = s.joint(side, sim::kKnee);
    out.knee_rate[side] = s.joint_rate(side, sim::kKnee);
  }
  out.pitch = s.q[sim::kPitch];
  out.pitch_rate = s.qd[sim::kPitch];
  return out;
}

void Controller::reset(const sim::SimState& s, const sim::Kinematics& kin,
                       const sim::GroundProfile& ground) {
  (void)ground;
  update_muscle_lengths(s);
  history_.fill(sense(s));
  for (Side side : {sim::kLeft, sim::kRight}) {
    stance_[side] = s.contact[side];
    if (!stance_[side]) swing_[side] = begin_swing(sim::leg_angle(kin, side));
  }
  effort_ = 0.0;
}

sim::JointTorques Controller::tick(const sim::SimState& s, const sim::Kinematics& kin,
                                   const sim::GroundProfile& ground) {
  update_muscle_lengths(s);
  history_.push(sense(s));

  sim::JointTorques torques{};
  damping_ = {};
  for (Side side : {sim::kLeft, sim::kRight}) {
    const Side other = side == sim::kLeft ? sim::kRight : sim::kLeft;
    const bool contact = s.contact[side];
    if (stance_[side] && !contact) swing_[side] = begin_swing(sim::leg_angle(kin, side));
    stance_[side] = contact;

    auto& legs = muscles_[side];
    if (contact) {
      stimuli_[side] = stance_stimuli(history_, side, params_, config_.stance, dt_);
    } else {
      stimuli_[side] = config_.stance.pre_stimulus;
    }
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      muscle_force(legs[m], config_.muscles[m], stimuli_[side][m], dt_,
                   config_.activation_time_constant);
      effort_ += stimuli_[side][m] * config_.muscles[m].max_force * std::abs(legs[m].v_ce) * dt_;
    }

    if (contact) {
      for (sim::Joint j : {sim::kHip, sim::kKnee, sim::kAnkle}) {
        double tau = 0.0;
        double damp = 0.0;
        for (std::size_t m = 0; m < kNumMuscles; ++m) {
          const MuscleConstants& c = config_.muscles[m];
          if (!c.arms[j].spans()) continue;
          tau += joint_torque(legs[m], c, j, s.joint(side, j));
          // v_CE = -pennation * sum(action * arm * rate), so the diagonal
          // term of d(torque)/d(rate) is -pennation * arm^2 * dF/dv.
          const double arm = c.arms[j].at(s.joint(side, j));
          damp += c.pennation * arm * arm * legs[m].damping;
        }
        torques[sim::torque_index(side, j)] = tau;
        damping_[sim::torque_index(side, j)] = damp;
      }
      continue;
    }

    SwingTargets& t = targets_[side];
    const double d = s.contact[other] ? kin.com_total.x() - kin.ankle[other].x() : 0.0;
    t.target_angle = target_leg_angle(d, kin.com_total_vel.x(), params_);
    t.angle = sim::leg_angle(kin, side);
    t.angle_rate = sim::leg_angle_rate(kin, side);
    t.clearance = params_[kClearance];
    const double clearance =
        sim::foot_bottom(kin, side) - sim::ground_height(ground, kin.ankle[side].x());
    advance_swing(swing_[side], clearance, s.joint(side, sim::kKnee), t, config_.swing);
    t.phase = swing_[side].phase;
    const SwingTorques sw =
        swing_torques(s.joint(side, sim::kKnee), s.joint_rate(side, sim::kKnee),
                      s.joint(side, sim::kAnkle), s.joint_rate(side, sim::kAnkle), t,
                      swing_[side], params_, config_.swing);
    torques[sim::torque_index(side, sim::kHip)] = sw.hip;
    torques[sim::torque_index(side, sim::kKnee)] = sw.knee;
    torques[sim::torque_index(side, sim::kAnkle)] = sw.ankle;
    damping_[sim::torque_index(side, sim::kKnee)] = config_.swing.knee_gain_ratio * params_[kDSwing];
    damping_[sim::torque_index(side, sim::kAnkle)] = config_.swing.ankle_gain_ratio * params_[kDSwing];
  }
  return torques;
}

}  // namespace gaitbo::control

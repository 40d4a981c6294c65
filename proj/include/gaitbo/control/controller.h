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

#ifndef GAITBO_CONTROL_CONTROLLER_H_
#define GAITBO_CONTROL_CONTROLLER_H_

#include <array>

#include <nlohmann/json.hpp>

#include "gaitbo/control/muscle.h"
#include "gaitbo/control/params.h"
#include "gaitbo/control/reflex.h"
#include "gaitbo/control/swing.h"
#include "gaitbo/sim/kinematics.h"
#include "gaitbo/sim/state.h"
#include "gaitbo/sim/terrain.h"

namespace gaitbo::control {

struct ControllerConfig {
  std::array<MuscleConstants, kNumMuscles> muscles = default_muscles();
  StanceConfig stance = default_stance_config();
  SwingConfig swing{};
  ParamBounds bounds = default_bounds();
  double activation_time_constant = kActivationTimeConstant;
};

ControllerConfig default_controller_config();

void to_json(nlohmann::json& j, const ControllerConfig& c);
void from_json(const nlohmann::json& j, ControllerConfig& c);

// Per-rollout controller instance: muscle states for both legs, the sensory
// delay line and the swing phase machines.
class Controller {
 public:
  Controller(const ControllerConfig& config, const PolicyParams& params, double dt);

  // Fills the delay line with the sensory state of s and starts swing
  // bookkeeping for legs that are airborne.
  void reset(const sim::SimState& s, const sim::Kinematics& kin, const sim::GroundProfile& ground);

  // One control tick. Legs in contact use muscle stimuli -> forces ->
  // torques; airborne legs use the swing laws.
  sim::JointTorques tick(const sim::SimState& s, const sim::Kinematics& kin,
                         const sim::GroundProfile& ground);

  const std::array<Muscle, kNumMuscles>& muscles(sim::Side side) const { return muscles_[side]; }
  const std::array<double, kNumMuscles>& stimuli(sim::Side side) const { return stimuli_[side]; }
  const SwingState& swing_state(sim::Side side) const { return swing_[side]; }
  const SwingTargets& swing_targets(sim::Side side) const { return targets_[side]; }
  bool in_stance(sim::Side side) const { return stance_[side]; }
  const DelayBuffer& history() const { return history_; }
  // -d(torque)/d(joint rate) of the last tick, for implicit integration.
  const sim::JointTorques& damping() const { return damping_; }
  // Integral of stimulus * F_max * |v_CE| over all muscles, J-like units.
  double effort() const { return effort_; }

 private:
  void update_muscle_lengths(const sim::SimState& s);
  SensorSample sense(const sim::SimState& s) const;

  const ControllerConfig& config_;
  PolicyParams params_;
  double dt_;
  DelayBuffer history_;
  std::array<std::array<Muscle, kNumMuscles>, 2> muscles_{};
  std::array<std::array<double, kNumMuscles>, 2> stimuli_{};
  std::array<SwingState, 2> swing_{};
  std::array<SwingTargets, 2> targets_{};
  std::array<bool, 2> stance_{false, false};
  sim::JointTorques damping_{};
  double effort_ = 0.0;
};

}  // namespace gaitbo::control

#endif  // GAITBO_CONTROL_CONTROLLER_H_

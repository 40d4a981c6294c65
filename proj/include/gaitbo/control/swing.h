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

#ifndef GAITBO_CONTROL_SWING_H_
#define GAITBO_CONTROL_SWING_H_

#include <string_view>

#include <nlohmann/json.hpp>

#include "gaitbo/control/params.h"

namespace gaitbo::control {

enum class SwingPhase { kFlex = 0, kHold = 1, kExtend = 2 };

std::string_view to_string(SwingPhase phase);

struct SwingTargets {
  double target_angle = 0.0;  // alpha_tgt, rad
  double angle = 0.0;         // alpha, rad
  double angle_rate = 0.0;    // rad/s
  double clearance = 0.0;     // desired l_clr, m
  SwingPhase phase = SwingPhase::kFlex;
};

// Fixed swing-leg constants. Knee and ankle PD gains are fractions of the
// optimized hip gains, so zero swing gains give zero swing torques.
struct SwingConfig {
  double knee_flex_target = 1.2;     // rad
  double knee_extend_target = 0.05;  // rad
  double knee_gain_ratio = 0.25;
  double ankle_target = -0.10;       // rad, dorsiflexed for heel-first contact
  double ankle_gain_ratio = 0.08;
  double extend_fraction = 0.8;      // of the way from swing-start angle to alpha_tgt
};

// alpha_tgt = alpha_0 + C_d d + C_v v.
double target_leg_angle(double d, double v, const PolicyParams& p);

// Per-leg swing bookkeeping; reset at toe-off.
struct SwingState {
  SwingPhase phase = SwingPhase::kFlex;
  double start_angle = 0.0;
  double hold_knee = 0.0;
};

SwingState begin_swing(double leg_angle);

// Phase transitions are monotone: flex -> hold once the foot clears l_clr,
// hold (or flex) -> extend once alpha passes extend_fraction of the way to
// alpha_tgt.
void advance_swing(SwingState& s, double foot_clearance, double knee, const SwingTargets& t,
                   const SwingConfig& cfg);

struct SwingTorques {
  double hip = 0.0;
  double knee = 0.0;
  double ankle = 0.0;
};

// Hip: K_p_swing (alpha_tgt - alpha) - K_d_swing alpha_dot. Knee: PD toward
// the flex target, the held angle, or the extension target by phase. Ankle:
// PD toward ankle_target.
SwingTorques swing_torques(double knee, double knee_rate, double ankle, double ankle_rate,
                           const SwingTargets& t, const SwingState& s, const PolicyParams& p,
                           const SwingConfig& cfg);

void to_json(nlohmann::json& j, const SwingConfig& c);
void from_json(const nlohmann::json& j, SwingConfig& c);

}  // namespace gaitbo::control

#endif  // GAITBO_CONTROL_SWING_H_

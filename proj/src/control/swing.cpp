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

#include "gaitbo/control/swing.h"

namespace gaitbo::control {

std::string_view to_string(SwingPhase phase) {
  switch (phase) {
    case SwingPhase::kFlex:
      return "flex";
    case SwingPhase::kHold:
      return "hold";
    case SwingPhase::kExtend:
      return "extend";
  }
  return "flex";
}

double target_leg_angle(double d, double v, const PolicyParams& p) {
  return p[kAlpha0] + p[kCd] * d + p[kCv] * v;
}

SwingState begin_swing(double leg_angle) {
  SwingState s;
  s.start_angle = leg_angle;
  return s;
}

void advance_swing(SwingState& s, double foot_clearance, double knee, const SwingTargets& t,
                   const SwingConfig& cfg) {
  const double threshold = s.start_angle + cfg.extend_fraction * (t.target_angle - s.start_angle);
  const bool past = t.target_angle >= s.start_angle ? t.angle >= threshold : t.angle <= threshold;
  if (s.phase == SwingPhase::kFlex && foot_clearance >= t.clearance) {
    s.phase = SwingPhase::kHold;
    s.hold_knee = knee;
  }
  if (s.phase != SwingPhase::kExtend && past) s.phase = SwingPhase::kExtend;
}

SwingTorques swing_torques(double knee, double knee_rate, double ankle, double ankle_rate,
                           const SwingTargets& t, const SwingState& s, const PolicyParams& p,
                           const SwingConfig& cfg) {
  SwingTorques out;
  out.hip = p[kPSwing] * (t.target_angle - t.angle) - p[kDSwing] * t.angle_rate;
  double knee_target = cfg.knee_extend_target;
  if (s.phase == SwingPhase::kFlex) knee_target = cfg.knee_flex_target;
  if (s.phase == SwingPhase::kHold) knee_target = s.hold_knee;
  out.knee = cfg.knee_gain_ratio * (p[kPSwing] * (knee_target - knee) - p[kDSwing] * knee_rate);
  out.ankle = cfg.ankle_gain_ratio *
              (p[kPSwing] * (cfg.ankle_target - ankle) - p[kDSwing] * ankle_rate);
  return out;
}

void to_json(nlohmann::json& j, const SwingConfig& c) {
  j = {{"knee_flex_target", c.knee_flex_target},
       {"knee_extend_target", c.knee_extend_target},
       {"knee_gain_ratio", c.knee_gain_ratio},
       {"ankle_target", c.ankle_target},
       {"ankle_gain_ratio", c.ankle_gain_ratio},
       {"extend_fraction", c.extend_fraction}};
}

void from_json(const nlohmann::json& j, SwingConfig& c) {
  c = SwingConfig{};
  c.knee_flex_target = j.value("knee_flex_target", c.knee_flex_target);
  c.knee_extend_target = j.value("knee_extend_target", c.knee_extend_target);
  c.knee_gain_ratio = j.value("knee_gain_ratio", c.knee_gain_ratio);
  c.ankle_target = j.value("ankle_target", c.ankle_target);
  c.ankle_gain_ratio = j.value("ankle_gain_ratio", c.ankle_gain_ratio);
  c.extend_fraction = j.value("extend_fraction", c.extend_fraction);
}

}  // namespace gaitbo::control

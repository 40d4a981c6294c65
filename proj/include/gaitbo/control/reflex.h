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

#ifndef GAITBO_CONTROL_REFLEX_H_
#define GAITBO_CONTROL_REFLEX_H_

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitbo/control/muscle.h"
#include "gaitbo/control/params.h"
#include "gaitbo/sim/state.h"

namespace gaitbo::control {

enum class SignalKind { kForce, kLength };

// S_target += sign * gain * P_source(t - delay). P is F/F_max for force
// signals and max(0, l_CE/l_opt - offset) for length signals. The gain is a
// policy parameter, or fixed_gain when no parameter is referenced.
struct ReflexPathway {
  MuscleId target = kSOL;
  MuscleId source = kSOL;
  SignalKind kind = SignalKind::kForce;
  std::optional<ParamId> gain;
  double fixed_gain = 0.0;
  double offset = 0.0;
  double delay = 0.0;  // s
  int sign = +1;
};

// One control tick of sensory data, both legs.
struct SensorSample {
  std::array<std::array<double, kNumMuscles>, 2> force{};   // F / F_max
  std::array<std::array<double, kNumMuscles>, 2> length{};  // l_CE / l_opt
  std::array<double, 2> knee{};
  std::array<double, 2> knee_rate{};
  double pitch = 0.0;  // forward lean positive
  double pitch_rate = 0.0;
};

// Fixed-capacity ring buffer; at(k) is the sample pushed k ticks ago.
class DelayBuffer {
 public:
  explicit DelayBuffer(std::size_t capacity = 1);

  void push(const SensorSample& s);
  // Replaces the whole history with s (initial conditions).
  void fill(const SensorSample& s);
  const SensorSample& at(std::size_t lag) const;
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return data_.size(); }

 private:
  std::vector<SensorSample> data_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

// Fixed (non-optimized) constants of the stance reflexes.
struct StanceConfig {
  std::array<double, kNumMuscles> pre_stimulus{};
  // Desired trunk lean and the delay of the trunk signal.
  double torso_target = 0.105;
  double torso_delay = 0.005;
  // VAS inhibition when the knee nears full extension while extending.
  double knee_inhibition_gain = 2.0;
  double knee_inhibition_angle = 0.10;
  double knee_delay = 0.010;
  std::vector<ReflexPathway> wiring;
};

StanceConfig default_stance_config();

std::size_t delay_ticks(double delay, double dt);
// Largest delay, in ticks, any stance pathway reads.
std::size_t max_delay_ticks(const StanceConfig& cfg, double dt);

// Trunk-balance stimulus K_p (theta_des - theta) - K_d theta_dot, with theta
// measured as backward lean so that the GLU (a hip extensor) is recruited
// when the trunk pitches forward past its target.
double torso_stimulus(double pitch, double pitch_rate, const PolicyParams& p,
                      double torso_target);

// Stimuli of the seven muscles of a stance leg, each clamped to [0.01, 1].
// Throws StateError when the buffer holds fewer samples than the longest
// delay requires.
std::array<double, kNumMuscles> stance_stimuli(const DelayBuffer& history, sim::Side side,
                                               const PolicyParams& p, const StanceConfig& cfg,
                                               double dt);

void to_json(nlohmann::json& j, const StanceConfig& c);
void from_json(const nlohmann::json& j, StanceConfig& c);

}  // namespace gaitbo::control

#endif  // GAITBO_CONTROL_REFLEX_H_

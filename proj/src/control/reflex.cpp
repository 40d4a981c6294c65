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

#include "gaitbo/control/reflex.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitbo/errors.h"

namespace gaitbo::control {

DelayBuffer::DelayBuffer(std::size_t capacity) : data_(std::max<std::size_t>(capacity, 1)) {}

void DelayBuffer::push(const SensorSample& s) {
  head_ = (head_ + 1) % data_.size();
  data_[head_] = s;
  size_ = std::min(size_ + 1, data_.size());
}

void DelayBuffer::fill(const SensorSample& s) {
  std::fill(data_.begin(), data_.end(), s);
  size_ = data_.size();
}

const SensorSample& DelayBuffer::at(std::size_t lag) const {
  if (lag >= size_) throw StateError("delay buffer does not cover the requested lag");
  return data_[(head_ + data_.size() - lag) % data_.size()];
}

StanceConfig default_stance_config() {
  StanceConfig c;
  c.pre_stimulus.fill(kMinStimulus);
  constexpr double kAnkle = 0.020, kKnee = 0.010, kHip = 0.005;
  auto force = [](MuscleId target, MuscleId source, ParamId gain, double delay, int sign) {
    ReflexPathway r;
    r.target = target;
    r.source = source;
    r.kind = SignalKind::kForce;
    r.gain = gain;
    r.delay = delay;
    r.sign = sign;
    return r;
  };
  c.wiring.push_back(force(kSOL, kSOL, kSol, kAnkle, +1));
  c.wiring.push_back(force(kGAS, kGAS, kGas, kAnkle, +1));
  c.wiring.push_back(force(kVAS, kVAS, kVas, kKnee, +1));
  c.wiring.push_back(force(kHAM, kHAM, kHam, kHip, +1));
  c.wiring.push_back(force(kGLU, kGLU, kGlu, kHip, +1));
  c.wiring.push_back(force(kTA, kSOL, kTaSol, kAnkle, -1));
  ReflexPathway ta;
  ta.target = kTA;
  ta.source = kTA;
  ta.kind = SignalKind::kLength;
  ta.gain = kTa;
  ta.offset = 1.0;
  ta.delay = kAnkle;
  c.wiring.push_back(ta);
  return c;
}

std::size_t delay_ticks(double delay, double dt) {
  return static_cast<std::size_t>(std::llround(delay / dt));
}

std::size_t max_delay_ticks(const StanceConfig& cfg, double dt) {
  std::size_t m = std::max(delay_ticks(cfg.torso_delay, dt), delay_ticks(cfg.knee_delay, dt));
  for (const ReflexPathway& r : cfg.wiring) m = std::max(m, delay_ticks(r.delay, dt));
  return m;
}

double torso_stimulus(double pitch, double pitch_rate, const PolicyParams& p,
                      double torso_target) {
  const double theta = -pitch;
  const double theta_rate = -pitch_rate;
  const double theta_des = -torso_target;
  return p[kPStance] * (theta_des - theta) - p[kDStance] * theta_rate;
}

std::array<double, kNumMuscles> stance_stimuli(const DelayBuffer& history, sim::Side side,
                                               const PolicyParams& p, const StanceConfig& cfg,
                                               double dt) {
  if (history.size() <= max_delay_ticks(cfg, dt)) {
    throw StateError("sensor history shorter than the longest reflex delay");
  }
  std::array<double, kNumMuscles> s = cfg.pre_stimulus;
  // Force (and length) feedback into GLU is blended with the trunk term.
  std::array<double, kNumMuscles> feedback{};
  for (const ReflexPathway& r : cfg.wiring) {
    const SensorSample& past = history.at(delay_ticks(r.delay, dt));
    const double signal = r.kind == SignalKind::kForce
                              ? past.force[side][r.source]
                              : std::max(0.0, past.length[side][r.source] - r.offset);
    const double gain = r.gain ? p[*r.gain] : r.fixed_gain;
    feedback[r.target] += r.sign * gain * signal;
  }
  for (std::size_t m = 0; m < kNumMuscles; ++m) s[m] += feedback[m];

  const SensorSample& knee = history.at(delay_ticks(cfg.knee_delay, dt));
  if (knee.knee[side] < cfg.knee_inhibition_angle && knee.knee_rate[side] < 0.0) {
    s[kVAS] -= cfg.knee_inhibition_gain * (cfg.knee_inhibition_angle - knee.knee[side]);
  }

  const SensorSample& trunk = history.at(delay_ticks(cfg.torso_delay, dt));
  const double torso = torso_stimulus(trunk.pitch, trunk.pitch_rate, p, cfg.torso_target);
  const double mix = p[kMixGlu];
  s[kGLU] = mix * s[kGLU] + (1.0 - mix) * torso;
  s[kHFL] = cfg.pre_stimulus[kHFL] + (1.0 - mix) * -torso;

  for (double& v : s) v = std::clamp(v, kMinStimulus, kMaxStimulus);
  return s;
}

void to_json(nlohmann::json& j, const StanceConfig& c) {
  j = nlohmann::json::object();
  for (std::size_t m = 0; m < kNumMuscles; ++m) {
    j["pre_stimulus"][std::string(muscle_name(static_cast<MuscleId>(m)))] = c.pre_stimulus[m];
  }
  j["torso_target"] = c.torso_target;
  j["torso_delay"] = c.torso_delay;
  j["knee_inhibition_gain"] = c.knee_inhibition_gain;
  j["knee_inhibition_angle"] = c.knee_inhibition_angle;
  j["knee_delay"] = c.knee_delay;
  auto& w = j["wiring"] = nlohmann::json::array();
  for (const ReflexPathway& r : c.wiring) {
    nlohmann::json e = {{"target", muscle_name(r.target)},
                        {"source", muscle_name(r.source)},
                        {"signal", r.kind == SignalKind::kForce ? "force" : "length"},
                        {"delay", r.delay},
                        {"sign", r.sign}};
    if (r.gain) {
      e["gain"] = param_name(*r.gain);
    } else {
      e["fixed_gain"] = r.fixed_gain;
    }
    if (r.kind == SignalKind::kLength) e["offset"] = r.offset;
    w.push_back(e);
  }
}

void from_json(const nlohmann::json& j, StanceConfig& c) {
  c = default_stance_config();
  if (j.contains("pre_stimulus")) {
    for (std::size_t m = 0; m < kNumMuscles; ++m) {
      const std::string name(muscle_name(static_cast<MuscleId>(m)));
      c.pre_stimulus[m] = j["pre_stimulus"].value(name, c.pre_stimulus[m]);
    }
  }
  c.torso_target = j.value("torso_target", c.torso_target);
  c.torso_delay = j.value("torso_delay", c.torso_delay);
  c.knee_inhibition_gain = j.value("knee_inhibition_gain", c.knee_inhibition_gain);
  c.knee_inhibition_angle = j.value("knee_inhibition_angle", c.knee_inhibition_angle);
  c.knee_delay = j.value("knee_delay", c.knee_delay);
  if (j.contains("wiring")) {
    c.wiring.clear();
    for (const auto& e : j["wiring"]) {
      ReflexPathway r;
      r.target = muscle_from_name(e.at("target").get<std::string>());
      r.source = muscle_from_name(e.at("source").get<std::string>());
      const std::string kind = e.at("signal").get<std::string>();
      if (kind != "force" && kind != "length") throw ParameterError("bad reflex signal " + kind);
      r.kind = kind == "force" ? SignalKind::kForce : SignalKind::kLength;
      if (e.contains("gain")) r.gain = param_from_name(e["gain"].get<std::string>());
      r.fixed_gain = e.value("fixed_gain", 0.0);
      r.offset = e.value("offset", 0.0);
      r.delay = e.at("delay").get<double>();
      r.sign = e.value("sign", +1);
      if (r.delay < 0.0) throw ParameterError("reflex delay must be nonnegative");
      c.wiring.push_back(r);
    }
  }
}

}  // namespace gaitbo::control

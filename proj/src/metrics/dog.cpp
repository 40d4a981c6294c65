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

#include "gaitbo/metrics/dog.h"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace gaitbo::metrics {
namespace {

// Linear interpolation of a sampled channel at time t.
template <typename F>
double sample_at(const std::vector<sim::Sample>& s, double t, F channel) {
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const sim::Sample& a, double v) { return a.time < v; });
  if (it == s.begin()) return channel(s.front());
  if (it == s.end()) return channel(s.back());
  const sim::Sample& b = *it;
  const sim::Sample& a = *(it - 1);
  const double w = (t - a.time) / (b.time - a.time);
  return (1.0 - w) * channel(a) + w * channel(b);
}

}  // namespace

std::vector<StepRecord> extract_steps(const sim::Trajectory& traj) {
  std::vector<StepRecord> out;
  if (traj.samples.empty()) return out;
  for (sim::Side side : {sim::kLeft, sim::kRight}) {
    std::vector<const sim::StepEvent*> strikes, toe_offs;
    for (const sim::StepEvent& e : traj.events) {
      if (e.side != side) continue;
      (e.kind == sim::EventKind::kHeelStrike ? strikes : toe_offs).push_back(&e);
    }
    const int knee = sim::joint_dof(side, sim::kKnee);
    const int ankle = sim::joint_dof(side, sim::kAnkle);
    for (std::size_t i = 0; i + 1 < strikes.size(); ++i) {
      const sim::StepEvent& h0 = *strikes[i];
      const sim::StepEvent& h1 = *strikes[i + 1];
      const sim::StepEvent* to = nullptr;
      for (const sim::StepEvent* e : toe_offs) {
        if (e->time > h0.time && e->time < h1.time) {
          to = e;
          break;
        }
      }
      if (to == nullptr) continue;

      StepRecord r;
      r.side = side;
      r.t_strike = h0.time;
      r.t_toe_off = to->time;
      r.t_next_strike = h1.time;
      r.ankle_strike = h0.snapshot.q[ankle];
      r.ankle_toe_off = to->snapshot.q[ankle];
      r.com_y_strike = h0.snapshot.com.y();
      r.com_y_toe_off = to->snapshot.com.y();
      r.com_y_midstance = sample_at(traj.samples, 0.5 * (h0.time + to->time),
                                    [](const sim::Sample& s) { return s.com.y(); });
      r.knee_swing = std::max(to->snapshot.q[knee], h1.snapshot.q[knee]);
      double pitch_sum = 0.0;
      int pitch_n = 0;
      for (const sim::Sample& s : traj.samples) {
        if (s.time < h0.time) continue;
        if (s.time > h1.time) break;
        if (s.time >= to->time) r.knee_swing = std::max(r.knee_swing, s.q[knee]);
        pitch_sum += s.q[sim::kPitch];
        ++pitch_n;
      }
      r.torso_mean = pitch_n > 0 ? pitch_sum / pitch_n
                                 : 0.5 * (h0.snapshot.q[sim::kPitch] + h1.snapshot.q[sim::kPitch]);
      r.speed = (h1.snapshot.com.x() - h0.snapshot.com.x()) / (h1.time - h0.time);
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(), [](const StepRecord& a, const StepRecord& b) {
    return a.t_strike < b.t_strike || (a.t_strike == b.t_strike && a.side < b.side);
  });
  return out;
}

int metric_m1(const StepRecord& r, const DogConfig& c) {
  return (c.knee_high > r.knee_swing && r.knee_swing > c.knee_low) ? 1 : 0;
}

int metric_m2(const StepRecord& r) { return (r.ankle_strike < 0.0 && r.ankle_toe_off > 0.0) ? 1 : 0; }

int metric_m3(const StepRecord& r) {
  return (r.com_y_strike < r.com_y_midstance && r.com_y_toe_off < r.com_y_midstance) ? 1 : 0;
}

int metric_m4(const StepRecord& r) { return r.torso_mean > 0.0 ? 1 : 0; }

double metric_m5(const StepRecord& r, double v_human) { return std::abs(r.speed - v_human); }

StepScore score_step(const StepRecord& r, const DogConfig& c) {
  StepScore s;
  s.m1 = metric_m1(r, c);
  s.m2 = metric_m2(r);
  s.m3 = metric_m3(r);
  s.m4 = metric_m4(r);
  s.m5 = metric_m5(r, c.v_human);
  s.score = s.m1 + s.m2 + s.m3 + s.m4 + s.m5;
  return s;
}

DogScore dog_score(const std::vector<StepRecord>& steps, const DogConfig& c) {
  DogScore out;
  for (const StepRecord& r : steps) {
    if (r.t_next_strike > c.window) continue;
    out.steps.push_back(score_step(r, c));
    out.phi += out.steps.back().score;
  }
  out.n = static_cast<int>(out.steps.size());
  return out;
}

DogScore dog_score(const sim::Trajectory& traj, const DogConfig& c) {
  return dog_score(extract_steps(traj), c);
}

void to_json(nlohmann::json& j, const DogConfig& c) {
  j = {{"knee_low", c.knee_low}, {"knee_high", c.knee_high}, {"v_human", c.v_human},
       {"window", c.window}};
}

void from_json(const nlohmann::json& j, DogConfig& c) {
  c = DogConfig{};
  c.knee_low = j.value("knee_low", c.knee_low);
  c.knee_high = j.value("knee_high", c.knee_high);
  c.v_human = j.value("v_human", c.v_human);
  c.window = j.value("window", c.window);
}

void write_score_csv(std::ostream& out, const std::string& id, const DogScore& s) {
  out.precision(17);
  out << "id,n,phi\n" << id << ',' << s.n << ',' << s.phi << "\n\nid,step,m1,m2,m3,m4,m5,score\n";
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const StepScore& p = s.steps[i];
    out << id << ',' << i << ',' << p.m1 << ',' << p.m2 << ',' << p.m3 << ',' << p.m4 << ','
        << p.m5 << ',' << p.score << '\n';
  }
}

}  // namespace gaitbo::metrics

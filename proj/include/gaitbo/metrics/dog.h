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

#ifndef GAITBO_METRICS_DOG_H_
#define GAITBO_METRICS_DOG_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitbo/sim/rollout.h"

namespace gaitbo::metrics {

// One gait cycle of one leg: heel strike, toe off, next heel strike.
struct StepRecord {
  sim::Side side = sim::kLeft;
  double t_strike = 0.0;
  double t_toe_off = 0.0;
  double t_next_strike = 0.0;
  double ankle_strike = 0.0;  // rad, dorsiflexion negative
  double ankle_toe_off = 0.0;
  double knee_swing = 0.0;    // rad, peak knee flexion during swing
  double com_y_strike = 0.0;  // m
  double com_y_midstance = 0.0;
  double com_y_toe_off = 0.0;
  double torso_mean = 0.0;    // rad, forward lean positive
  double speed = 0.0;         // m/s, mean CoM speed over the cycle

  bool operator==(const StepRecord&) const = default;
};

struct DogConfig {
  double knee_low = 0.35;   // rad
  double knee_high = 1.40;  // rad
  double v_human = 1.3;     // m/s
  double window = 5.0;      // s, only cycles finished by then count
};

struct StepScore {
  int m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  double m5 = 0.0;
  double score = 0.0;
};

struct DogScore {
  std::vector<StepScore> steps;
  double phi = 0.0;
  int n = 0;
};

// Cycles ordered by strike time. Cycles without a toe off in between, or
// cut short by the end of the trajectory, are dropped.
std::vector<StepRecord> extract_steps(const sim::Trajectory& traj);

int metric_m1(const StepRecord& r, const DogConfig& c = {});
int metric_m2(const StepRecord& r);
int metric_m3(const StepRecord& r);
int metric_m4(const StepRecord& r);
double metric_m5(const StepRecord& r, double v_human = 1.3);

StepScore score_step(const StepRecord& r, const DogConfig& c = {});
DogScore dog_score(const std::vector<StepRecord>& steps, const DogConfig& c = {});
DogScore dog_score(const sim::Trajectory& traj, const DogConfig& c = {});

// Highest score a single step can reach at non-negative speeds up to 2 v_human.
inline double max_step_score(const DogConfig& c = {}) { return 4.0 + c.v_human; }

void to_json(nlohmann::json& j, const DogConfig& c);
void from_json(const nlohmann::json& j, DogConfig& c);

// id,n,phi then per-step rows id,step,m1..m5,score.
void write_score_csv(std::ostream& out, const std::string& id, const DogScore& s);

}  // namespace gaitbo::metrics

#endif  // GAITBO_METRICS_DOG_H_

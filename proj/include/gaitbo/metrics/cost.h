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

#ifndef GAITBO_METRICS_COST_H_
#define GAITBO_METRICS_COST_H_

#include <string>

#include "gaitbo/sim/rollout.h"

namespace gaitbo::metrics {

struct CostInputs {
  double t = 0.0;      // s walked
  double d = 0.0;      // m, final hip position
  double s = 0.0;      // m/s, mean speed
  double s_tgt = 1.3;  // m/s
  bool fell = false;
  double x_fall = 0.0;  // m
  double v_avg = 0.0;   // m/s
  double v_tgt = 1.3;   // m/s
  double c_tr = 0.0;    // cost of transport
};

enum class CostVariant { kSmooth, kCma };

std::string to_string(CostVariant v);
CostVariant cost_variant_from_string(const std::string& s);

// 1/(1+t) + 0.3/(1+d) + 0.01 (s - s_tgt)
double smooth_cost(const CostInputs& in);
// 300 - x_fall on a fall, else 100 |v_avg - v_tgt| + c_tr
double cma_cost(const CostInputs& in);
double cost(CostVariant v, const CostInputs& in);

// Value recorded for an evaluation that could not produce a cost.
double fault_cost(CostVariant v);

// Distances below min_distance are floored there when forming c_tr.
struct CostConfig {
  double target_speed = 1.3;
  double min_distance = 1.0;  // m
};

CostInputs cost_inputs(const sim::Trajectory& traj, const CostConfig& c = {});

}  // namespace gaitbo::metrics

#endif  // GAITBO_METRICS_COST_H_

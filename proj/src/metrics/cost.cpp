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

#include "gaitbo/metrics/cost.h"

#include <algorithm>
#include <cmath>

#include "gaitbo/errors.h"

namespace gaitbo::metrics {

std::string to_string(CostVariant v) { return v == CostVariant::kSmooth ? "smooth" : "cma"; }

CostVariant cost_variant_from_string(const std::string& s) {
  if (s == "smooth") return CostVariant::kSmooth;
  if (s == "cma") return CostVariant::kCma;
  throw ParameterError("unknown cost variant: " + s);
}

double smooth_cost(const CostInputs& in) {
  return 1.0 / (1.0 + in.t) + 0.3 / (1.0 + in.d) + 0.01 * (in.s - in.s_tgt);
}

double cma_cost(const CostInputs& in) {
  if (in.fell) return 300.0 - in.x_fall;
  return 100.0 * std::abs(in.v_avg - in.v_tgt) + in.c_tr;
}

double cost(CostVariant v, const CostInputs& in) {
  return v == CostVariant::kSmooth ? smooth_cost(in) : cma_cost(in);
}

// Smooth: the t = d = 0 value plus a small penalty. Cma: the x_fall = 0 value.
double fault_cost(CostVariant v) { return v == CostVariant::kSmooth ? 1.31 : 300.0; }

CostInputs cost_inputs(const sim::Trajectory& traj, const CostConfig& c) {
  CostInputs in;
  in.t = std::max(0.0, traj.end_time);
  in.d = std::max(0.0, traj.final_hip_x);
  in.s = in.t > 0.0 ? traj.final_hip_x / in.t : 0.0;
  in.s_tgt = c.target_speed;
  in.v_tgt = c.target_speed;
  in.v_avg = in.s;
  in.fell = traj.fell();
  in.x_fall = in.fell ? std::max(0.0, traj.x_fall) : 0.0;
  const double weight_distance =
      traj.total_mass * traj.gravity * std::max(c.min_distance, traj.final_hip_x);
  in.c_tr = weight_distance > 0.0 ? traj.effort / weight_distance : 0.0;
  return in;
}

}  // namespace gaitbo::metrics

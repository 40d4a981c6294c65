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

#ifndef GAITBO_OPT_RUN_H_
#define GAITBO_OPT_RUN_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace gaitbo::opt {

// Objective over raw parameter vectors. A throw or a non-finite return is a
// faulted trial and records the fault cost.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  Eigen::VectorXd span() const { return upper - lower; }
  bool contains(const Eigen::VectorXd& x) const;
  Eigen::VectorXd from_unit(const Eigen::VectorXd& u) const;
  Eigen::VectorXd to_unit(const Eigen::VectorXd& x) const;
  void validate() const;
};

struct Trial {
  int index = 0;
  Eigen::VectorXd params;
  double cost = 0.0;
  bool fault = false;
  double wall_time = 0.0;  // s; only written when enabled
  long candidate = -1;     // grid row for grid-restricted strategies
  bool walked = false;     // set by callers that know the trial outcome

  bool operator==(const Trial& o) const {
    return index == o.index && params == o.params && cost == o.cost && fault == o.fault &&
           wall_time == o.wall_time && candidate == o.candidate && walked == o.walked;
  }
};

struct OptRun {
  std::string strategy;
  std::uint64_t seed = 0;
  int budget = 0;
  std::vector<Trial> history;
  std::vector<double> best_so_far;

  double best_cost() const {
    return best_so_far.empty() ? std::numeric_limits<double>::infinity() : best_so_far.back();
  }
  // Earliest trial achieving the best cost.
  const Trial& best_trial() const;
  bool done() const { return static_cast<int>(history.size()) >= budget; }
  bool operator==(const OptRun&) const = default;
};

struct EvalOptions {
  double fault_cost = std::numeric_limits<double>::infinity();
  bool record_wall_time = false;
};

// Calls the objective, appends the trial and updates best-so-far.
double evaluate(OptRun& run, const Objective& f, const Eigen::VectorXd& x,
                const EvalOptions& opts, long candidate = -1);

// One JSON object per trial: trial, params, cost, fault, walked[, candidate][, wall_time].
nlohmann::json trial_to_json(const Trial& t, bool with_wall_time);
Trial trial_from_json(const nlohmann::json& j);
void write_jsonl(std::ostream& out, const OptRun& run, bool with_wall_time = false);
void write_best_so_far_csv(std::ostream& out, const OptRun& run);

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_RUN_H_

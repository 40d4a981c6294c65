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

#include "gaitbo/opt/run.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "gaitbo/errors.h"

namespace gaitbo::opt {

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

Eigen::VectorXd Box::from_unit(const Eigen::VectorXd& u) const {
  return lower + span().cwiseProduct(u);
}

Eigen::VectorXd Box::to_unit(const Eigen::VectorXd& x) const {
  return (x - lower).cwiseQuotient(span());
}

void Box::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) throw ParameterError("box size mismatch");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(std::isfinite(lower[i]) && std::isfinite(upper[i]) && upper[i] > lower[i])) {
      throw ParameterError("box bounds must be finite with upper > lower");
    }
  }
}

const Trial& OptRun::best_trial() const {
  if (history.empty()) throw StateError("run has no trials");
  const Trial* best = &history.front();
  for (const Trial& t : history) {
    if (t.cost < best->cost) best = &t;
  }
  return *best;
}

double evaluate(OptRun& run, const Objective& f, const Eigen::VectorXd& x,
                const EvalOptions& opts, long candidate) {
  Trial t;
  t.index = static_cast<int>(run.history.size());
  t.params = x;
  t.candidate = candidate;
  const auto start = std::chrono::steady_clock::now();
  try {
    t.cost = f(x);
    t.fault = !std::isfinite(t.cost);
  } catch (const std::exception&) {
    t.fault = true;
  }
  if (t.fault) t.cost = opts.fault_cost;
  if (opts.record_wall_time) {
    t.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const double prev = run.best_cost();
  run.best_so_far.push_back(std::min(prev, t.cost));
  run.history.push_back(std::move(t));
  return run.history.back().cost;
}

nlohmann::json trial_to_json(const Trial& t, bool with_wall_time) {
  nlohmann::json j;
  j["trial"] = t.index;
  j["params"] = std::vector<double>(t.params.data(), t.params.data() + t.params.size());
  j["cost"] = t.cost;
  j["fault"] = t.fault;
  j["walked"] = t.walked;
  if (t.candidate >= 0) j["candidate"] = t.candidate;
  if (with_wall_time) j["wall_time"] = t.wall_time;
  return j;
}

Trial trial_from_json(const nlohmann::json& j) {
  Trial t;
  t.index = j.at("trial").get<int>();
  const auto p = j.at("params").get<std::vector<double>>();
  t.params = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  t.cost = j.at("cost").get<double>();
  t.fault = j.value("fault", false);
  t.walked = j.value("walked", false);
  t.candidate = j.value("candidate", -1L);
  t.wall_time = j.value("wall_time", 0.0);
  return t;
}

void write_jsonl(std::ostream& out, const OptRun& run, bool with_wall_time) {
  for (const Trial& t : run.history) out << trial_to_json(t, with_wall_time).dump() << '\n';
}

void write_best_so_far_csv(std::ostream& out, const OptRun& run) {
  out.precision(17);
  out << "trial,best\n";
  for (std::size_t i = 0; i < run.best_so_far.size(); ++i) {
    out << i + 1 << ',' << run.best_so_far[i] << '\n';
  }
}

}  // namespace gaitbo::opt

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

#ifndef GAITBO_HARNESS_SUMMARY_H_
#define GAITBO_HARNESS_SUMMARY_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaitbo/harness/experiment.h"

namespace gaitbo::harness {

struct CurvePoint {
  int trial = 0;  // 1-based
  int n = 0;      // runs that reached this trial
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct StrategySummary {
  Strategy strategy = Strategy::kRandom;
  std::vector<CurvePoint> curve;
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<int> first_success;  // per successful run, 1-based trial
};

struct Summary {
  std::vector<StrategySummary> strategies;
  std::optional<double> optimum;
  const StrategySummary* find(Strategy s) const;
};

// Linear-interpolated quantile of sorted values, q in [0, 1].
double quantile(std::vector<double> v, double q);

Summary summarize(const std::vector<RunResult>& results, std::optional<double> optimum = {});

// strategy,trial,n,mean,median,q25,q75,min,max
void write_curve_csv(std::ostream& out, const Summary& s);
// strategy,runs,successes,rate,median_first_success
void write_success_csv(std::ostream& out, const Summary& s);
// Median best-so-far per strategy with a 25-75% band and the optimum line.
void write_convergence_svg(std::ostream& out, const Summary& s, const std::string& title);

// Writes summary.csv, success.csv and convergence.svg into dir.
void write_summary_files(const std::string& dir, const Summary& s, const std::string& title);

// Best-so-far curves aligned by run id for paired comparisons.
std::map<int, std::vector<double>> curves_by_run(const std::vector<RunResult>& results, Strategy s);

}  // namespace gaitbo::harness

#endif  // GAITBO_HARNESS_SUMMARY_H_

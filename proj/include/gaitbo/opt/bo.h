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

#ifndef GAITBO_OPT_BO_H_
#define GAITBO_OPT_BO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gaitbo/gp/gp.h"
#include "gaitbo/opt/run.h"

namespace gaitbo::opt {

enum class AcquisitionKind { kExpectedImprovement, kUpperConfidenceBound };

std::string to_string(AcquisitionKind k);
AcquisitionKind acquisition_from_string(const std::string& s);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::kExpectedImprovement;
  double weight = 0.0;  // EI: improvement margin xi; UCB: kappa

  void validate() const;
};

// Larger is better. Costs are minimized: EI uses improvement below best,
// UCB scores -(mean - kappa sd).
double acquisition_value(const AcquisitionSpec& a, const gp::Posterior& p, double best);
double expected_improvement(double mean, double variance, double best, double xi = 0.0);

class CandidateGrid {
 public:
  CandidateGrid() = default;
  // Rows are candidates; duplicate rows are rejected.
  explicit CandidateGrid(Eigen::MatrixXd points);

  std::size_t size() const { return tested_.size(); }
  int dim() const { return static_cast<int>(points_.cols()); }
  Eigen::VectorXd row(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }
  const Eigen::MatrixXd& points() const { return points_; }
  bool tested(std::size_t i) const { return tested_[i]; }
  void mark_tested(std::size_t i) { tested_.at(i) = true; }
  std::size_t untested() const;
  std::optional<std::size_t> first_untested() const;
  std::optional<std::size_t> find(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd points_;
  std::vector<bool> tested_;
};

// Row features of every grid point under the kernel's feature map.
Eigen::MatrixXd grid_features(const gp::Kernel& k, const CandidateGrid& grid);

// Untested candidate with the largest acquisition, ties to the lowest index.
// With an unfitted model the first untested candidate. Empty when the grid is
// exhausted. features may be precomputed with grid_features.
std::optional<std::size_t> next_candidate_bo(const gp::GpModel& model, const CandidateGrid& grid,
                                             const AcquisitionSpec& acq, double best,
                                             const Eigen::MatrixXd* features = nullptr);

struct BoOptions {
  AcquisitionSpec acquisition{};
  bool fit_hyperparams = true;
  gp::HyperGrid hyper{};
  // Costs are z-scored before each fit; the GP prior mean is zero.
  bool standardize = true;
  double noise_ratio = 1e-4;  // used when hyperparameter fitting is off
  // Trials drawn uniformly from the grid with the run seed before the
  // acquisition takes over.
  int initial_random = 1;
  EvalOptions eval{};
  std::string strategy = "bo";
};

// Sequential select, evaluate, refit for budget trials (fewer if the grid
// runs out). Every evaluated vector is a grid row.
OptRun run_bo(const Objective& f, CandidateGrid grid, const gp::Kernel& kernel, int budget,
              std::uint64_t seed, const BoOptions& opts = {});

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_BO_H_

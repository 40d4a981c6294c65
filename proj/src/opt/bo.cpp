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

#include "gaitbo/opt/bo.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "gaitbo/errors.h"
#include "gaitbo/random.h"
#include "gaitbo/store/feature_store.h"

namespace gaitbo::opt {

std::string to_string(AcquisitionKind k) {
  return k == AcquisitionKind::kExpectedImprovement ? "ei" : "ucb";
}

AcquisitionKind acquisition_from_string(const std::string& s) {
  if (s == "ei") return AcquisitionKind::kExpectedImprovement;
  if (s == "ucb") return AcquisitionKind::kUpperConfidenceBound;
  throw ParameterError("unknown acquisition: " + s);
}

void AcquisitionSpec::validate() const {
  if (!(weight >= 0.0)) throw ParameterError("exploration weight must be nonnegative");
}

double expected_improvement(double mean, double variance, double best, double xi) {
  const double imp = best - mean - xi;
  if (!(variance > 0.0)) return std::max(imp, 0.0);
  const double sd = std::sqrt(variance);
  const double z = imp / sd;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, imp * cdf + sd * pdf);
}

double acquisition_value(const AcquisitionSpec& a, const gp::Posterior& p, double best) {
  if (a.kind == AcquisitionKind::kExpectedImprovement) {
    return expected_improvement(p.mean, p.variance, best, a.weight);
  }
  return -(p.mean - a.weight * std::sqrt(std::max(0.0, p.variance)));
}

CandidateGrid::CandidateGrid(Eigen::MatrixXd points) : points_(std::move(points)), tested_(points_.rows(), false) {
  std::unordered_multimap<std::uint64_t, Eigen::Index> seen;
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = points_;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const auto h = store::hash_row(rows.data() + i * rows.cols(), static_cast<int>(rows.cols()));
    const auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (points_.row(it->second) == points_.row(i)) throw ParameterError("candidate grid has duplicate rows");
    }
    seen.emplace(h, i);
  }
}

std::size_t CandidateGrid::untested() const {
  std::size_t n = 0;
  for (bool t : tested_) n += t ? 0 : 1;
  return n;
}

std::optional<std::size_t> CandidateGrid::first_untested() const {
  for (std::size_t i = 0; i < tested_.size(); ++i) {
    if (!tested_[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> CandidateGrid::find(const Eigen::VectorXd& x) const {
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    if (points_.row(i).transpose() == x) return static_cast<std::size_t>(i);
  }
  return std::nullopt;
}

Eigen::MatrixXd grid_features(const gp::Kernel& k, const CandidateGrid& grid) {
  if (grid.size() == 0) return {};
  const Eigen::VectorXd f0 = k.map().features(grid.row(0));
  Eigen::MatrixXd f(static_cast<Eigen::Index>(grid.size()), f0.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f.row(static_cast<Eigen::Index>(i)) = k.map().features(grid.row(i)).transpose();
  }
  return f;
}

std::optional<std::size_t> next_candidate_bo(const gp::GpModel& model, const CandidateGrid& grid,
                                             const AcquisitionSpec& acq, double best,
                                             const Eigen::MatrixXd* features) {
  acq.validate();
  if (!model.fitted()) return grid.first_untested();
  std::optional<std::size_t> arg;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.tested(i)) continue;
    const gp::Posterior p =
        features ? model.posterior_features(features->row(static_cast<Eigen::Index>(i)).transpose())
                 : model.posterior(grid.row(i));
    const double v = acquisition_value(acq, p, best);
    if (!arg || v > best_value) {
      arg = i;
      best_value = v;
    }
  }
  return arg;
}

OptRun run_bo(const Objective& f, CandidateGrid grid, const gp::Kernel& kernel, int budget,
              std::uint64_t seed, const BoOptions& opts) {
  if (budget < 1) throw ParameterError("budget must be at least 1");
  opts.acquisition.validate();
  OptRun run;
  run.strategy = opts.strategy;
  run.seed = seed;
  run.budget = budget;
  Rng rng(seed);
  const Eigen::MatrixXd features = grid_features(kernel, grid);

  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  while (!run.done()) {
    std::optional<std::size_t> pick;
    if (static_cast<int>(run.history.size()) < opts.initial_random) {
      const std::size_t left = grid.untested();
      if (left == 0) break;
      std::size_t k = uniform_index(rng, left);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.tested(i)) continue;
        if (k-- == 0) {
          pick = i;
          break;
        }
      }
    } else {
      double mean = 0.0, sd = 1.0;
      std::vector<double> z = ys;
      if (opts.standardize) {
        for (double y : ys) mean += y;
        mean /= static_cast<double>(ys.size());
        double var = 0.0;
        for (double y : ys) var += (y - mean) * (y - mean);
        var /= static_cast<double>(ys.size());
        sd = var > 0.0 ? std::sqrt(var) : 1.0;
        for (double& v : z) v = (v - mean) / sd;
      }
      double best = std::numeric_limits<double>::infinity();
      for (double v : z) best = std::min(best, v);

      double zvar = 0.0;
      for (double v : z) zvar += v * v;
      zvar /= static_cast<double>(z.size());
      const double s2 = zvar > 0.0 ? zvar : 1.0;
      gp::GpModel model = gp::GpModel::fit(kernel.with_params({kernel.params().length_scale, s2}), xs, z,
                                           std::max(opts.noise_ratio * s2, 1e-12));
      if (opts.fit_hyperparams) model = gp::fit_hyperparams(model, opts.hyper);
      pick = next_candidate_bo(model, grid, opts.acquisition, best, &features);
    }
    if (!pick) break;
    grid.mark_tested(*pick);
    const Eigen::VectorXd x = grid.row(*pick);
    const double y = evaluate(run, f, x, opts.eval, static_cast<long>(*pick));
    xs.push_back(x);
    ys.push_back(y);
  }
  return run;
}

}  // namespace gaitbo::opt

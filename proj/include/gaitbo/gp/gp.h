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

#ifndef GAITBO_GP_GP_H_
#define GAITBO_GP_GP_H_

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gaitbo/gp/kernel.h"

namespace gaitbo::gp {

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

// Zero-mean GP regression. Values are immutable once fitted: fit and
// add_observation return new models.
class GpModel {
 public:
  GpModel(Kernel kernel, double noise_variance);

  // Factorizes K + (noise + jitter) I, escalating jitter from 0 through
  // 1e-10 .. 1e-4 (times the signal variance). Throws NumericalError when
  // every level fails.
  static GpModel fit(Kernel kernel, const std::vector<Eigen::VectorXd>& x,
                     const std::vector<double>& y, double noise_variance);
  GpModel refit() const;
  // Extends the factorization by one row; falls back to a full refit when
  // the extension is not positive.
  GpModel add_observation(const Eigen::VectorXd& x, double y) const;

  bool fitted() const { return fitted_; }
  std::size_t size() const { return y_.size(); }
  const Kernel& kernel() const { return kernel_; }
  double noise_variance() const { return noise_; }
  double jitter() const { return jitter_; }
  const std::vector<Eigen::VectorXd>& inputs() const { return x_; }
  const std::vector<double>& targets() const { return y_; }

  Posterior posterior(const Eigen::VectorXd& x) const;
  Posterior posterior_features(const Eigen::VectorXd& f) const;
  double prior_variance() const { return kernel_.params().signal_variance; }
  double log_marginal_likelihood() const;

  nlohmann::json snapshot() const;

 private:
  void factorize();

  Kernel kernel_;
  double noise_;
  double jitter_ = 0.0;
  bool fitted_ = false;
  std::vector<Eigen::VectorXd> x_;
  Eigen::MatrixXd f_;  // mapped features, one row per observation
  std::vector<double> y_;
  Eigen::MatrixXd l_;  // lower Cholesky factor
  Eigen::VectorXd alpha_;
};

// Rebuilds a model from snapshot() output with the given feature map.
GpModel gp_from_snapshot(const nlohmann::json& j, std::shared_ptr<const FeatureMap> map);

struct HyperGrid {
  int length_scales = 41;   // log-spaced over [1e-2, 1e2] x feature span
  double low = 1e-2;
  double high = 1e2;
  double noise_ratio = 1e-4;  // noise = ratio x observation variance
};

// Grid search on the log marginal likelihood. Signal variance is the
// observation variance (population), noise is noise_ratio of it. Fewer than
// three observations, or constant ones, return the largest length scale.
GpModel fit_hyperparams(const GpModel& model, const HyperGrid& grid = {});
std::vector<double> length_scale_grid(double span, const HyperGrid& grid = {});

}  // namespace gaitbo::gp

#endif  // GAITBO_GP_GP_H_

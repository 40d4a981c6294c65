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

#include "gaitbo/gp/gp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaitbo/errors.h"

namespace gaitbo::gp {

namespace {
constexpr double kJitterLevels[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
}

GpModel::GpModel(Kernel kernel, double noise_variance)
    : kernel_(std::move(kernel)), noise_(noise_variance) {
  if (!(noise_variance > 0.0 && std::isfinite(noise_variance))) {
    throw ParameterError("noise variance must be positive");
  }
}

GpModel GpModel::fit(Kernel kernel, const std::vector<Eigen::VectorXd>& x,
                     const std::vector<double>& y, double noise_variance) {
  if (x.empty()) throw ParameterError("GP fit needs at least one observation");
  if (x.size() != y.size()) throw ParameterError("input and target counts differ");
  GpModel m(std::move(kernel), noise_variance);
  m.x_ = x;
  m.y_ = y;
  const Eigen::VectorXd f0 = m.kernel_.map().features(x.front());
  m.f_.resize(static_cast<Eigen::Index>(x.size()), f0.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.f_.row(static_cast<Eigen::Index>(i)) = m.kernel_.map().features(x[i]).transpose();
  }
  m.factorize();
  return m;
}

GpModel GpModel::refit() const {
  if (x_.empty()) throw StateError("no observations to fit");
  return fit(kernel_, x_, y_, noise_);
}

void GpModel::factorize() {
  const Eigen::MatrixXd k = kernel_.gram(f_);
  const Eigen::Index n = k.rows();
  const double s2 = kernel_.params().signal_variance;
  for (double level : kJitterLevels) {
    const double jitter = level * s2;
    Eigen::MatrixXd a = k;
    a.diagonal().array() += noise_ + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) continue;
    const Eigen::MatrixXd l = llt.matrixL();
    if (!(l.diagonal().array() > 0.0).all() || !l.allFinite()) continue;
    l_ = l;
    jitter_ = jitter;
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y_.data(), n);
    alpha_ = llt.solve(yv);
    fitted_ = true;
    return;
  }
  throw NumericalError("Gram matrix is not positive definite even with jitter 1e-4; increase the noise floor");
}

GpModel GpModel::add_observation(const Eigen::VectorXd& x, double y) const {
  if (!fitted_) {
    return fit(kernel_, {x}, {y}, noise_);
  }
  GpModel m = *this;
  const Eigen::VectorXd fx = kernel_.map().features(x);
  const Eigen::Index n = f_.rows();
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) kx[i] = kernel_.on_features(f_.row(i).transpose(), fx);
  const Eigen::VectorXd lk = l_.triangularView<Eigen::Lower>().solve(kx);
  const double d2 = kernel_.params().signal_variance + noise_ + jitter_ - lk.squaredNorm();
  m.x_.push_back(x);
  m.y_.push_back(y);
  m.f_.conservativeResize(n + 1, Eigen::NoChange);
  m.f_.row(n) = fx.transpose();
  if (!(d2 > 1e-14 * kernel_.params().signal_variance)) {
    m.factorize();
    return m;
  }
  m.l_.conservativeResize(n + 1, n + 1);
  m.l_.col(n).setZero();
  m.l_.row(n).head(n) = lk.transpose();
  m.l_(n, n) = std::sqrt(d2);
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(m.y_.data(), n + 1);
  const Eigen::VectorXd tmp = m.l_.triangularView<Eigen::Lower>().solve(yv);
  m.alpha_ = m.l_.transpose().triangularView<Eigen::Upper>().solve(tmp);
  return m;
}

Posterior GpModel::posterior_features(const Eigen::VectorXd& f) const {
  if (!fitted_) throw StateError("GP model is not fitted");
  const Eigen::Index n = f_.rows();
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) kx[i] = kernel_.on_features(f_.row(i).transpose(), f);
  Posterior p;
  p.mean = kx.dot(alpha_);
  const Eigen::VectorXd v = l_.triangularView<Eigen::Lower>().solve(kx);
  p.variance = std::max(0.0, kernel_.params().signal_variance - v.squaredNorm());
  return p;
}

Posterior GpModel::posterior(const Eigen::VectorXd& x) const {
  if (!fitted_) throw StateError("GP model is not fitted");
  return posterior_features(kernel_.map().features(x));
}

double GpModel::log_marginal_likelihood() const {
  if (!fitted_) throw StateError("GP model is not fitted");
  const Eigen::Index n = f_.rows();
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y_.data(), n);
  return -0.5 * yv.dot(alpha_) - l_.diagonal().array().log().sum() -
         0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

nlohmann::json GpModel::snapshot() const {
  nlohmann::json j;
  j["kernel"] = to_string(kernel_.kind());
  j["params"] = kernel_.params();
  j["noise_variance"] = noise_;
  j["jitter"] = jitter_;
  nlohmann::json xs = nlohmann::json::array();
  for (const auto& x : x_) xs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  j["inputs"] = xs;
  j["targets"] = y_;
  return j;
}

GpModel gp_from_snapshot(const nlohmann::json& j, std::shared_ptr<const FeatureMap> map) {
  Kernel k(kernel_kind_from_string(j.at("kernel").get<std::string>()), std::move(map),
           j.at("params").get<KernelParams>());
  const double noise = j.at("noise_variance").get<double>();
  std::vector<Eigen::VectorXd> xs;
  for (const auto& row : j.at("inputs")) {
    const auto v = row.get<std::vector<double>>();
    xs.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  const auto ys = j.at("targets").get<std::vector<double>>();
  if (xs.empty()) return GpModel(k, noise);
  return GpModel::fit(k, xs, ys, noise);
}

std::vector<double> length_scale_grid(double span, const HyperGrid& grid) {
  if (!(span > 0.0)) span = 1.0;
  std::vector<double> out;
  const int n = std::max(1, grid.length_scales);
  const double a = std::log10(grid.low), b = std::log10(grid.high);
  for (int i = 0; i < n; ++i) {
    const double e = n == 1 ? a : a + (b - a) * i / (n - 1);
    out.push_back(span * std::pow(10.0, e));
  }
  return out;
}

GpModel fit_hyperparams(const GpModel& model, const HyperGrid& grid) {
  const auto& y = model.targets();
  const auto& x = model.inputs();
  if (x.empty()) return model;

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double var = 0.0, sq = 0.0;
  for (double v : y) {
    var += (v - mean) * (v - mean);
    sq += v * v;
  }
  var /= static_cast<double>(y.size());
  sq /= static_cast<double>(y.size());

  // Feature span over the observations.
  Eigen::MatrixXd f(static_cast<Eigen::Index>(x.size()), model.kernel().map().features(x[0]).size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.row(static_cast<Eigen::Index>(i)) = model.kernel().map().features(x[i]).transpose();
  }
  const double span = (f.colwise().maxCoeff() - f.colwise().minCoeff()).maxCoeff();
  const std::vector<double> ls = length_scale_grid(span, grid);

  const bool degenerate = y.size() < 3 || !(var > 1e-12 * std::max(1.0, sq));
  const double s2 = degenerate ? (sq > 0.0 ? sq : model.kernel().params().signal_variance) : var;
  const double noise = std::max(grid.noise_ratio * s2, 1e-12);
  if (degenerate) {
    return GpModel::fit(model.kernel().with_params({ls.back(), s2}), x, y, noise);
  }

  double best_lml = -std::numeric_limits<double>::infinity();
  double best_l = ls.back();
  for (double l : ls) {
    try {
      const GpModel m = GpModel::fit(model.kernel().with_params({l, s2}), x, y, noise);
      const double lml = m.log_marginal_likelihood();
      if (lml > best_lml) {
        best_lml = lml;
        best_l = l;
      }
    } catch (const NumericalError&) {
    }
  }
  return GpModel::fit(model.kernel().with_params({best_l, s2}), x, y, noise);
}

}  // namespace gaitbo::gp

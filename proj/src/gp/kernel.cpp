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

#include "gaitbo/gp/kernel.h"

#include <cmath>

#include "gaitbo/errors.h"
#include "gaitbo/store/feature_store.h"

namespace gaitbo::gp {

std::string to_string(KernelKind k) { return k == KernelKind::kSeEuclidean ? "se-euclid" : "se-dog"; }

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "se-euclid" || s == "se-euclidean") return KernelKind::kSeEuclidean;
  if (s == "se-dog" || s == "dog") return KernelKind::kSeDog;
  throw ParameterError("unknown kernel: " + s);
}

BoxFeatureMap::BoxFeatureMap(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), span_(upper - lower_) {
  if (lower_.size() != upper.size() || (span_.array() <= 0.0).any()) {
    throw ParameterError("box feature map needs upper > lower");
  }
}

Eigen::VectorXd BoxFeatureMap::features(const Eigen::VectorXd& x) const {
  if (x.size() != lower_.size()) throw ParameterError("dimension mismatch");
  return (x - lower_).cwiseQuotient(span_);
}

DogFeatureMap::DogFeatureMap(std::shared_ptr<const store::FeatureStore> store, bool standardize)
    : store_(std::move(store)), standardize_(standardize) {
  if (!store_ || store_->size() == 0) throw StateError("DoG kernel needs a populated store");
  if (standardize_) {
    mean_ = store_->phi_mean();
    const double sd = store_->phi_stddev();
    scale_ = sd > 0.0 ? sd : 1.0;
  }
}

double DogFeatureMap::phi(const Eigen::VectorXd& x) const { return store_->lookup_phi(x); }

Eigen::VectorXd DogFeatureMap::features(const Eigen::VectorXd& x) const {
  Eigen::VectorXd f(1);
  f[0] = standardize_ ? (phi(x) - mean_) / scale_ : phi(x);
  return f;
}

void KernelParams::validate() const {
  if (!(length_scale > 0.0 && std::isfinite(length_scale))) throw ParameterError("length scale must be positive");
  if (!(signal_variance > 0.0 && std::isfinite(signal_variance))) {
    throw ParameterError("signal variance must be positive");
  }
}

void to_json(nlohmann::json& j, const KernelParams& p) {
  j = {{"length_scale", p.length_scale}, {"signal_variance", p.signal_variance}};
}

void from_json(const nlohmann::json& j, KernelParams& p) {
  p.length_scale = j.at("length_scale").get<double>();
  p.signal_variance = j.at("signal_variance").get<double>();
  p.validate();
}

Kernel::Kernel(KernelKind kind, std::shared_ptr<const FeatureMap> map, KernelParams params)
    : kind_(kind), map_(std::move(map)), params_(params) {
  if (!map_) throw ParameterError("kernel needs a feature map");
  params_.validate();
}

double Kernel::on_features(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb) const {
  const double r2 = (fa - fb).squaredNorm();
  const double l = params_.length_scale;
  return params_.signal_variance * std::exp(-0.5 * r2 / (l * l));
}

double Kernel::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return on_features(map_->features(a), map_->features(b));
}

Eigen::MatrixXd Kernel::gram(const Eigen::MatrixXd& features) const {
  const Eigen::Index n = features.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = params_.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = on_features(features.row(i).transpose(), features.row(j).transpose());
    }
  }
  return k;
}

Kernel se_euclidean(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, KernelParams p) {
  return Kernel(KernelKind::kSeEuclidean, std::make_shared<BoxFeatureMap>(lower, upper), p);
}

Kernel se_dog(std::shared_ptr<const store::FeatureStore> store, bool standardize, KernelParams p) {
  return Kernel(KernelKind::kSeDog, std::make_shared<DogFeatureMap>(std::move(store), standardize), p);
}

}  // namespace gaitbo::gp

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

#ifndef GAITBO_GP_KERNEL_H_
#define GAITBO_GP_KERNEL_H_

#include <memory>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace gaitbo::store {
class FeatureStore;
}

namespace gaitbo::gp {

enum class KernelKind { kSeEuclidean, kSeDog };

std::string to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& s);

// Maps a raw parameter vector to the feature vector the kernel measures
// distance in. Throws LookupError for points it cannot map.
class FeatureMap {
 public:
  virtual ~FeatureMap() = default;
  virtual Eigen::VectorXd features(const Eigen::VectorXd& x) const = 0;
};

// Unit-box normalization of raw parameters.
class BoxFeatureMap : public FeatureMap {
 public:
  BoxFeatureMap(Eigen::VectorXd lower, Eigen::VectorXd upper);
  Eigen::VectorXd features(const Eigen::VectorXd& x) const override;

 private:
  Eigen::VectorXd lower_, span_;
};

// phi from a feature store, optionally z-scored with the store's phi
// mean and standard deviation.
class DogFeatureMap : public FeatureMap {
 public:
  DogFeatureMap(std::shared_ptr<const store::FeatureStore> store, bool standardize = true);
  Eigen::VectorXd features(const Eigen::VectorXd& x) const override;
  double phi(const Eigen::VectorXd& x) const;
  bool standardized() const { return standardize_; }
  double phi_mean() const { return mean_; }
  double phi_scale() const { return scale_; }

 private:
  std::shared_ptr<const store::FeatureStore> store_;
  bool standardize_;
  double mean_ = 0.0;
  double scale_ = 1.0;
};

// Identity map, for toy problems and tests.
class IdentityFeatureMap : public FeatureMap {
 public:
  Eigen::VectorXd features(const Eigen::VectorXd& x) const override { return x; }
};

struct KernelParams {
  double length_scale = 1.0;
  double signal_variance = 1.0;

  void validate() const;
  bool operator==(const KernelParams&) const = default;
};

void to_json(nlohmann::json& j, const KernelParams& p);
void from_json(const nlohmann::json& j, KernelParams& p);

// Squared exponential over features: s2 exp(-|f(a) - f(b)|^2 / (2 l^2)).
class Kernel {
 public:
  Kernel(KernelKind kind, std::shared_ptr<const FeatureMap> map, KernelParams params = {});

  KernelKind kind() const { return kind_; }
  const KernelParams& params() const { return params_; }
  const FeatureMap& map() const { return *map_; }
  std::shared_ptr<const FeatureMap> map_ptr() const { return map_; }
  Kernel with_params(const KernelParams& p) const { return Kernel(kind_, map_, p); }

  double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  // Same, on already-mapped features.
  double on_features(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb) const;
  Eigen::MatrixXd gram(const Eigen::MatrixXd& features) const;  // rows are points

 private:
  KernelKind kind_;
  std::shared_ptr<const FeatureMap> map_;
  KernelParams params_;
};

Kernel se_euclidean(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                    KernelParams p = {});
Kernel se_dog(std::shared_ptr<const store::FeatureStore> store, bool standardize = true,
              KernelParams p = {});

}  // namespace gaitbo::gp

#endif  // GAITBO_GP_KERNEL_H_

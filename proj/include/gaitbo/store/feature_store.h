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

#ifndef GAITBO_STORE_FEATURE_STORE_H_
#define GAITBO_STORE_FEATURE_STORE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gaitbo/control/params.h"
#include "gaitbo/metrics/dog.h"
#include "gaitbo/sim/model.h"
#include "gaitbo/sim/rollout.h"

namespace gaitbo::store {

struct StoreMetadata {
  std::uint64_t seed = 0;           // Sobol scramble seed, 0 = unscrambled
  std::uint64_t count = 0;
  std::uint64_t config_hash = 0;    // see sim::sim_config_hash
  std::string created;              // caller supplied, kept verbatim
  std::uint64_t faults = 0;
  double duration = 5.0;            // s per rollout
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const StoreMetadata&) const = default;
};

void to_json(nlohmann::json& j, const StoreMetadata& m);
void from_json(const nlohmann::json& j, StoreMetadata& m);

// Sobol-sampled parameter rows with their phi. Rows are looked up by exact
// bit pattern through a hash index.
class FeatureStore {
 public:
  FeatureStore() = default;
  FeatureStore(Eigen::MatrixXd params, Eigen::VectorXd phi, StoreMetadata meta);

  std::size_t size() const { return static_cast<std::size_t>(phi_.size()); }
  int dim() const { return static_cast<int>(params_.cols()); }
  const Eigen::MatrixXd& params() const { return params_; }
  const Eigen::VectorXd& phi() const { return phi_; }
  const StoreMetadata& metadata() const { return meta_; }
  Eigen::VectorXd row(std::size_t i) const { return params_.row(static_cast<Eigen::Index>(i)).transpose(); }

  std::optional<std::size_t> find(const Eigen::VectorXd& x) const;
  // Throws LookupError for a vector that is not a row.
  double lookup_phi(const Eigen::VectorXd& x) const;
  std::size_t index_of(const Eigen::VectorXd& x) const;

  // Replaces the stored phi of row i.
  void set_phi(std::size_t i, double phi);

  // Indices of the k highest phi values, ties to the lower index.
  std::vector<std::size_t> top_k(std::size_t k) const;

  double phi_mean() const;
  double phi_stddev() const;  // population

  bool operator==(const FeatureStore& o) const {
    return params_ == o.params_ && phi_ == o.phi_ && meta_ == o.meta_;
  }

 private:
  void rebuild_index();

  Eigen::MatrixXd params_;
  Eigen::VectorXd phi_;
  StoreMetadata meta_;
  std::unordered_multimap<std::uint64_t, std::size_t> index_;
};

std::uint64_t hash_row(const double* data, int dim);

struct PrecomputeConfig {
  std::size_t n = 100000;
  std::uint64_t scramble_seed = 0;
  int workers = 1;
  double duration = 5.0;
  std::string created;
  control::ParamBounds bounds = control::default_bounds();
  sim::LinkSet model = sim::default_link_set();
  sim::SimConfig sim = sim::default_sim_config();
  metrics::DogConfig dog{};
};

// phi for one parameter vector: 5 s on the undisturbed model on flat ground.
// A rollout that throws yields 0 and sets *fault.
double compute_phi(const control::PolicyParams& p, const PrecomputeConfig& cfg, bool* fault = nullptr);

// Result is independent of worker count and scheduling.
FeatureStore precompute(const PrecomputeConfig& cfg);

// Binary layout, little endian:
//   magic "GBFS" | u32 version | u64 n | u32 dim |
//   f64[n*dim] params row-major | f64[n] phi |
//   u64 meta length | meta JSON bytes | u64 FNV-1a of everything before it
void save(const FeatureStore& s, std::ostream& out);
void save(const FeatureStore& s, const std::string& path);
FeatureStore load(std::istream& in);
FeatureStore load(const std::string& path);

enum class StalenessPolicy { kIgnore, kWarn, kFail };

// Compares the stored config hash against expected_hash. Returns true when
// they match. On mismatch warns on stderr (kWarn) or throws StateError (kFail).
bool check_staleness(const FeatureStore& s, std::uint64_t expected_hash, StalenessPolicy policy);

// params..., phi with a header row.
void write_csv(const FeatureStore& s, std::ostream& out);

}  // namespace gaitbo::store

#endif  // GAITBO_STORE_FEATURE_STORE_H_

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

#ifndef GAITBO_OPT_WARM_START_H_
#define GAITBO_OPT_WARM_START_H_

#include <cstdint>

#include <Eigen/Core>

#include "gaitbo/store/feature_store.h"

namespace gaitbo::opt {

// Uniform seeded pick among the k highest-phi store rows.
Eigen::VectorXd warm_start_from_store(const store::FeatureStore& store, std::size_t k,
                                      std::uint64_t seed);

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_WARM_START_H_

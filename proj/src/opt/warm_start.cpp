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

#include "gaitbo/opt/warm_start.h"

#include "gaitbo/errors.h"
#include "gaitbo/random.h"

namespace gaitbo::opt {

Eigen::VectorXd warm_start_from_store(const store::FeatureStore& store, std::size_t k,
                                      std::uint64_t seed) {
  if (store.size() == 0) throw StateError("warm start needs a populated store");
  if (k < 1 || k > store.size()) throw ParameterError("k must lie in [1, store size]");
  const auto top = store.top_k(k);
  Rng rng(seed);
  return store.row(top[uniform_index(rng, k)]);
}

}  // namespace gaitbo::opt

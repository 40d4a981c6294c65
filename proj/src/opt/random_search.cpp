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

#include "gaitbo/opt/random_search.h"

#include "gaitbo/errors.h"
#include "gaitbo/random.h"

namespace gaitbo::opt {

OptRun run_random_search(const Objective& f, const Box& box, int budget, std::uint64_t seed,
                         const EvalOptions& eval) {
  box.validate();
  if (budget < 1) throw ParameterError("budget must be at least 1");
  OptRun run;
  run.strategy = "random";
  run.seed = seed;
  run.budget = budget;
  Rng rng(seed);
  const int n = box.dim();
  for (int t = 0; t < budget; ++t) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = uniform(rng, box.lower[i], box.upper[i]);
    evaluate(run, f, x, eval);
  }
  return run;
}

}  // namespace gaitbo::opt

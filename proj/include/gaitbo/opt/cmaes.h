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

#ifndef GAITBO_OPT_CMAES_H_
#define GAITBO_OPT_CMAES_H_

#include <cstdint>

#include <Eigen/Core>

#include "gaitbo/opt/run.h"

namespace gaitbo::opt {

struct CmaesOptions {
  int lambda = 0;            // 0 -> 4 + floor(3 ln d)
  int max_resample = 100;    // per offspring, then project onto the box
  EvalOptions eval{};
  std::string strategy = "cmaes";
};

int default_lambda(int dim);

// (mu/mu_w, lambda) CMA-ES. The search runs in box-normalized coordinates,
// so sigma is a fraction of the box span in every coordinate. Offspring
// outside the box are resampled. Exactly budget evaluations are made; the
// last generation is truncated.
OptRun run_cmaes(const Objective& f, const Box& box, const Eigen::VectorXd& init, double sigma,
                 int budget, std::uint64_t seed, const CmaesOptions& opts = {});

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_CMAES_H_

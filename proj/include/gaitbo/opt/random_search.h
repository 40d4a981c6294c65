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

#ifndef GAITBO_OPT_RANDOM_SEARCH_H_
#define GAITBO_OPT_RANDOM_SEARCH_H_

#include <cstdint>

#include "gaitbo/opt/run.h"

namespace gaitbo::opt {

// budget i.i.d. uniform draws from the box.
OptRun run_random_search(const Objective& f, const Box& box, int budget, std::uint64_t seed,
                         const EvalOptions& eval = {});

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_RANDOM_SEARCH_H_

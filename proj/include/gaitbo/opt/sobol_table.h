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

#ifndef GAITBO_OPT_SOBOL_TABLE_H_
#define GAITBO_OPT_SOBOL_TABLE_H_

#include <cstddef>
#include <cstdint>

namespace gaitbo::opt::detail {

// Joe-Kuo direction numbers (new-joe-kuo-6.21201). Polynomial p includes the
// leading and trailing bits, so its degree is bit_width(p) - 1. Initial
// values for dimension d are kSobolInit[kSobolOffset[d] .. kSobolOffset[d+1]).
extern const std::size_t kSobolTableDims;
extern const std::uint32_t kSobolPoly[];
extern const std::uint32_t kSobolOffset[];
extern const std::uint32_t kSobolInit[];

}  // namespace gaitbo::opt::detail

#endif  // GAITBO_OPT_SOBOL_TABLE_H_

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

#include "gaitbo/opt/sobol.h"

#include <bit>

#include "gaitbo/errors.h"
#include "gaitbo/opt/sobol_table.h"
#include "gaitbo/random.h"

namespace gaitbo::opt {

namespace {
constexpr int kBits = 32;
}

SobolSequence::SobolSequence(int dim, std::uint64_t scramble_seed) : dim_(dim) {
  if (dim < 1 || dim > kSobolMaxDim || static_cast<std::size_t>(dim) > detail::kSobolTableDims) {
    throw ParameterError("Sobol dimension out of range");
  }
  directions_.assign(static_cast<std::size_t>(dim) * kBits, 0);
  for (int d = 0; d < dim; ++d) {
    std::uint32_t* v = &directions_[static_cast<std::size_t>(d) * kBits];
    const std::uint32_t poly = detail::kSobolPoly[d];
    const int degree = std::bit_width(poly) - 1;
    if (degree == 0) {
      // van der Corput
      for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
      continue;
    }
    const std::uint32_t* init = &detail::kSobolInit[detail::kSobolOffset[d]];
    for (int k = 0; k < degree && k < kBits; ++k) v[k] = init[k] << (kBits - 1 - k);
    for (int k = degree; k < kBits; ++k) {
      std::uint32_t x = v[k - degree] ^ (v[k - degree] >> degree);
      for (int j = 1; j < degree; ++j) {
        if ((poly >> (degree - j)) & 1u) x ^= v[k - j];
      }
      v[k] = x;
    }
  }
  state_.assign(dim, 0);
  shift_.assign(dim, 0);
  if (scramble_seed != 0) {
    Rng rng(scramble_seed);
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng() >> 32);
  }
}

Eigen::VectorXd SobolSequence::next() {
  Eigen::VectorXd out(dim_);
  constexpr double kScale = 1.0 / 4294967296.0;
  for (int d = 0; d < dim_; ++d) out[d] = static_cast<double>(state_[d] ^ shift_[d]) * kScale;
  // Advance: flip the direction number of the lowest zero bit of the index.
  const int c = std::countr_one(index_);
  if (c >= kBits) throw ParameterError("Sobol sequence exhausted");
  for (int d = 0; d < dim_; ++d) state_[d] ^= directions_[static_cast<std::size_t>(d) * kBits + c];
  ++index_;
  return out;
}

void SobolSequence::skip(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) next();
}

Eigen::MatrixXd sobol_points(int n, int dim, std::uint64_t scramble_seed) {
  if (n < 1) throw ParameterError("Sobol point count must be at least 1");
  SobolSequence seq(dim, scramble_seed);
  Eigen::MatrixXd out(n, dim);
  for (int i = 0; i < n; ++i) out.row(i) = seq.next().transpose();
  return out;
}

}  // namespace gaitbo::opt

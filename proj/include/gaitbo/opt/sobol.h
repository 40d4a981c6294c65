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

#ifndef GAITBO_OPT_SOBOL_H_
#define GAITBO_OPT_SOBOL_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace gaitbo::opt {

inline constexpr int kSobolMaxDim = 21201;

// Gray-code Sobol generator with 32-bit direction numbers. Point 0 is the
// origin. With a nonzero scramble seed every coordinate is XOR-shifted by a
// seeded random 32-bit mask (digital shift).
class SobolSequence {
 public:
  explicit SobolSequence(int dim, std::uint64_t scramble_seed = 0);

  int dim() const { return dim_; }
  std::uint64_t index() const { return index_; }
  // Next point in [0, 1)^dim.
  Eigen::VectorXd next();
  void skip(std::uint64_t n);

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> directions_;  // dim x 32
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
};

// First n points as the rows of an n x dim matrix.
Eigen::MatrixXd sobol_points(int n, int dim, std::uint64_t scramble_seed = 0);

}  // namespace gaitbo::opt

#endif  // GAITBO_OPT_SOBOL_H_

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

#ifndef GAITBO_RANDOM_H_
#define GAITBO_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace gaitbo {

// std::mt19937_64 is bit-exact across standard libraries; the distributions in
// <random> are not, so conversions to floating point are done here.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Standard normal by the polar method; the second variate is discarded.
inline double normal01(Rng& rng) {
  double u, v, s;
  do {
    u = 2.0 * uniform01(rng) - 1.0;
    v = 2.0 * uniform01(rng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed splitting: child = splitmix64(splitmix64(parent ^ stream) + index).
// Every consumer of randomness derives its seed through here so that runs,
// strategies and terrain draws are independent streams of one master seed.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(parent ^ stream) + index);
}

}  // namespace gaitbo

#endif  // GAITBO_RANDOM_H_

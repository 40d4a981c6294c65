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

#ifndef GAITBO_ERRORS_H_
#define GAITBO_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gaitbo {

// Argument outside its documented domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an object in the wrong state (unfitted model, empty
// store, exhausted grid).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Key not present (feature-store lookups).
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed, truncated or stale file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite simulator state.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure (e.g. a Gram matrix that stays indefinite after jitter).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaitbo

#endif  // GAITBO_ERRORS_H_

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

#ifndef GAITBO_CONTROL_PARAMS_H_
#define GAITBO_CONTROL_PARAMS_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gaitbo::control {

// The ten stance gains followed by the six swing parameters.
enum ParamId : std::size_t {
  kGas = 0,
  kGlu,
  kHam,
  kSol,
  kTaSol,
  kTa,
  kVas,
  kPStance,
  kDStance,
  kMixGlu,
  kPSwing,
  kDSwing,
  kAlpha0,
  kCd,
  kCv,
  kClearance,
  kNumParams
};

inline constexpr std::size_t kParamCount = kNumParams;

std::string_view param_name(ParamId id);
// Throws ParameterError for an unknown name.
ParamId param_from_name(std::string_view name);

struct PolicyParams {
  std::array<double, kParamCount> values{};

  double operator[](ParamId id) const { return values[id]; }
  double& operator[](ParamId id) { return values[id]; }
  std::span<const double, kParamCount> span() const { return values; }

  static PolicyParams from_span(std::span<const double> v);

  bool operator==(const PolicyParams&) const = default;
};

struct ParamBounds {
  std::array<double, kParamCount> lower{};
  std::array<double, kParamCount> upper{};

  bool contains(const PolicyParams& p) const;
  // Maps [0,1]^16 onto the box and back.
  PolicyParams from_unit(std::span<const double> u) const;
  std::array<double, kParamCount> to_unit(const PolicyParams& p) const;
  void validate() const;

  bool operator==(const ParamBounds&) const = default;
};

ParamBounds default_bounds();

// Flat record: 16 numbers in ParamId order.
std::string to_csv_row(const PolicyParams& p);
PolicyParams params_from_csv_row(const std::string& row);
std::string csv_header();

// JSON (object keyed by name, or array) or CSV (optional header, one row).
PolicyParams load_params(const std::string& path);
void save_params_json(const PolicyParams& p, const std::string& path);

void to_json(nlohmann::json& j, const PolicyParams& p);
void from_json(const nlohmann::json& j, PolicyParams& p);
void to_json(nlohmann::json& j, const ParamBounds& b);
void from_json(const nlohmann::json& j, ParamBounds& b);

}  // namespace gaitbo::control

#endif  // GAITBO_CONTROL_PARAMS_H_

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

#include "gaitbo/control/params.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaitbo/errors.h"

namespace gaitbo::control {

namespace {

constexpr std::array<std::string_view, kParamCount> kNames = {
    "K_GAS",      "K_GLU",     "K_HAM",     "K_SOL",   "K_TA_SOL", "K_TA",
    "K_VAS",      "K_p_stance", "K_d_stance", "K_mix_GLU", "K_p_swing", "K_d_swing",
    "alpha_0",    "C_d",       "C_v",       "l_clr"};

}  // namespace

std::string_view param_name(ParamId id) { return kNames.at(id); }

ParamId param_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (kNames[i] == name) return static_cast<ParamId>(i);
  }
  throw ParameterError("unknown policy parameter '" + std::string(name) + "'");
}

PolicyParams PolicyParams::from_span(std::span<const double> v) {
  if (v.size() != kParamCount) throw ParameterError("policy parameter vector must have 16 entries");
  PolicyParams p;
  std::copy(v.begin(), v.end(), p.values.begin());
  return p;
}

bool ParamBounds::contains(const PolicyParams& p) const {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (!(p.values[i] >= lower[i] && p.values[i] <= upper[i])) return false;
  }
  return true;
}

PolicyParams ParamBounds::from_unit(std::span<const double> u) const {
  if (u.size() != kParamCount) throw ParameterError("unit vector must have 16 entries");
  PolicyParams p;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    p.values[i] = lower[i] + u[i] * (upper[i] - lower[i]);
  }
  return p;
}

std::array<double, kParamCount> ParamBounds::to_unit(const PolicyParams& p) const {
  std::array<double, kParamCount> u{};
  for (std::size_t i = 0; i < kParamCount; ++i) {
    u[i] = (p.values[i] - lower[i]) / (upper[i] - lower[i]);
  }
  return u;
}

void ParamBounds::validate() const {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (!(upper[i] > lower[i])) {
      throw ParameterError("empty bound for " + std::string(kNames[i]));
    }
  }
  if (!(lower[kClearance] > 0.0)) throw ParameterError("l_clr lower bound must be positive");
}

ParamBounds default_bounds() {
  ParamBounds b;
  // clang-format off
  b.lower = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,   0.0,  0.0, 1.5, 0.0, 0.0, 0.02};
  b.upper = {3.0, 3.0, 3.0, 3.0, 3.0, 5.0, 3.0, 5.0, 1.0, 1.0, 500.0, 50.0, 2.2, 2.0, 0.6, 0.15};
  // clang-format on
  return b;
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (i) out += ',';
    out += kNames[i];
  }
  return out;
}

std::string to_csv_row(const PolicyParams& p) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.values[i]);
    out += buf;
  }
  return out;
}

PolicyParams params_from_csv_row(const std::string& row) {
  PolicyParams p;
  std::stringstream ss(row);
  std::string cell;
  std::size_t i = 0;
  while (std::getline(ss, cell, ',')) {
    if (i >= kParamCount) throw FormatError("too many fields in parameter row");
    try {
      std::size_t used = 0;
      p.values[i] = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw FormatError("bad number '" + cell + "' in parameter row");
    }
    ++i;
  }
  if (i != kParamCount) throw FormatError("parameter row must have 16 fields");
  return p;
}

void to_json(nlohmann::json& j, const PolicyParams& p) {
  j = nlohmann::json::object();
  for (std::size_t i = 0; i < kParamCount; ++i) j[std::string(kNames[i])] = p.values[i];
}

void from_json(const nlohmann::json& j, PolicyParams& p) {
  if (j.is_array()) {
    const auto v = j.get<std::vector<double>>();
    p = PolicyParams::from_span(v);
    return;
  }
  for (std::size_t i = 0; i < kParamCount; ++i) {
    p.values[i] = j.at(std::string(kNames[i])).get<double>();
  }
}

void to_json(nlohmann::json& j, const ParamBounds& b) {
  j = nlohmann::json::object();
  for (std::size_t i = 0; i < kParamCount; ++i) {
    j[std::string(kNames[i])] = {b.lower[i], b.upper[i]};
  }
}

void from_json(const nlohmann::json& j, ParamBounds& b) {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const auto& r = j.at(std::string(kNames[i]));
    b.lower[i] = r.at(0).get<double>();
    b.upper[i] = r.at(1).get<double>();
  }
  b.validate();
}

PolicyParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open parameter file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParameterError("empty parameter file " + path);
  try {
    if (text[first] == '{' || text[first] == '[') {
      return nlohmann::json::parse(text).get<PolicyParams>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("bad parameter file " + path + ": " + e.what());
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto c = line.find_first_not_of(" \t\r");
    if (c == std::string::npos) continue;
    if (!(std::isdigit(static_cast<unsigned char>(line[c])) || line[c] == '-' || line[c] == '+' ||
          line[c] == '.')) {
      continue;  // header
    }
    return params_from_csv_row(line);
  }
  throw ParameterError("no parameter row in " + path);
}

void save_params_json(const PolicyParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << nlohmann::json(p).dump(2) << '\n';
}

}  // namespace gaitbo::control

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

#include "gaitbo/sim/terrain.h"

#include <algorithm>
#include <cmath>

#include "gaitbo/errors.h"
#include "gaitbo/random.h"

namespace gaitbo::sim {

std::string to_string(GroundKind kind) {
  switch (kind) {
    case GroundKind::kFlat:
      return "flat";
    case GroundKind::kRough:
      return "rough";
    case GroundKind::kRampUp:
      return "ramp-up";
    case GroundKind::kRampDown:
      return "ramp-down";
  }
  return "flat";
}

GroundKind ground_kind_from_string(const std::string& s) {
  if (s == "flat") return GroundKind::kFlat;
  if (s == "rough") return GroundKind::kRough;
  if (s == "ramp-up") return GroundKind::kRampUp;
  if (s == "ramp-down") return GroundKind::kRampDown;
  throw ParameterError("unknown ground kind '" + s + "'");
}

void GroundProfile::finalize() {
  std::sort(grades.begin(), grades.end(),
            [](const GradeSegment& a, const GradeSegment& b) { return a.start_x < b.start_x; });
  segment_base.assign(grades.size(), 0.0);
  for (std::size_t i = 1; i < grades.size(); ++i) {
    segment_base[i] =
        segment_base[i - 1] + grades[i - 1].grade * (grades[i].start_x - grades[i - 1].start_x);
  }
}

void GroundProfile::validate() const {
  if (kind == GroundKind::kRough) {
    if (!(cell_width > 0.0)) throw ParameterError("rough ground cell width must be positive");
    for (double o : offsets) {
      if (std::abs(o) > magnitude) throw ParameterError("rough ground offset exceeds magnitude");
    }
  }
  double prev = 0.0;
  for (const GradeSegment& g : grades) {
    const double m = std::abs(g.grade);
    if (m > kMaxGrade + 1e-12) throw ParameterError("ramp grade exceeds 0.20");
    if (m + 1e-12 < prev) throw ParameterError("ramp grades must be nondecreasing in magnitude");
    prev = m;
  }
}

GroundProfile flat_ground() { return GroundProfile{}; }

GroundProfile rough_ground(std::uint64_t seed, double magnitude, double cell_width,
                           double length, double start_x) {
  if (!(magnitude >= 0.0) || !(cell_width > 0.0) || !(length >= 0.0)) {
    throw ParameterError("invalid rough ground parameters");
  }
  GroundProfile g;
  g.kind = GroundKind::kRough;
  g.magnitude = magnitude;
  g.cell_width = cell_width;
  g.start_x = start_x;
  g.seed = seed;
  const auto cells = static_cast<std::size_t>(std::ceil(length / cell_width));
  g.offsets.reserve(cells);
  Rng rng(seed);
  for (std::size_t i = 0; i < cells; ++i) {
    g.offsets.push_back(magnitude * (2.0 * uniform01(rng) - 1.0));
  }
  return g;
}

GroundProfile ramp_ground(bool up, double max_grade, double increment, double interval) {
  if (!(max_grade >= 0.0 && max_grade <= kMaxGrade) || !(increment > 0.0) ||
      !(interval > 0.0)) {
    throw ParameterError("invalid ramp parameters");
  }
  GroundProfile g;
  g.kind = up ? GroundKind::kRampUp : GroundKind::kRampDown;
  const double sign = up ? 1.0 : -1.0;
  for (int k = 1;; ++k) {
    const double grade = std::min(max_grade, k * increment);
    g.grades.push_back({k * interval, sign * grade});
    if (grade >= max_grade) break;
  }
  g.finalize();
  return g;
}

GroundProfile single_grade(double grade, double start_x) {
  GroundProfile g;
  g.kind = grade >= 0.0 ? GroundKind::kRampUp : GroundKind::kRampDown;
  g.grades.push_back({start_x, grade});
  g.finalize();
  return g;
}

namespace {

double cell_height(const GroundProfile& g, long cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= g.offsets.size()) return 0.0;
  return g.offsets[static_cast<std::size_t>(cell)];
}

double rough_height(const GroundProfile& g, double x) {
  const double u = (x - g.start_x) / g.cell_width;
  const long cell = static_cast<long>(std::floor(u));
  const double h = cell_height(g, cell);
  const double half = 0.5 * g.edge_blend;
  if (half <= 0.0) return h;
  // Distance to the nearest boundary decides the blend.
  const double left = (u - cell) * g.cell_width;
  const double right = g.cell_width - left;
  if (left < half) {
    const double w = 0.5 + 0.5 * left / half;
    return w * h + (1.0 - w) * cell_height(g, cell - 1);
  }
  if (right < half) {
    const double w = 0.5 + 0.5 * right / half;
    return w * h + (1.0 - w) * cell_height(g, cell + 1);
  }
  return h;
}

double ramp_height(const GroundProfile& g, double x) {
  if (g.grades.empty() || x <= g.grades.front().start_x) return 0.0;
  auto it = std::upper_bound(g.grades.begin(), g.grades.end(), x,
                             [](double v, const GradeSegment& s) { return v < s.start_x; });
  const std::size_t i = static_cast<std::size_t>(it - g.grades.begin()) - 1;
  const double base = i < g.segment_base.size() ? g.segment_base[i] : 0.0;
  return base + g.grades[i].grade * (x - g.grades[i].start_x);
}

}  // namespace

double ground_height(const GroundProfile& profile, double x) {
  switch (profile.kind) {
    case GroundKind::kFlat:
      return 0.0;
    case GroundKind::kRough:
      return rough_height(profile, x);
    case GroundKind::kRampUp:
    case GroundKind::kRampDown:
      return ramp_height(profile, x);
  }
  return 0.0;
}

void to_json(nlohmann::json& j, const GroundProfile& g) {
  j = {{"kind", to_string(g.kind)}};
  if (g.kind == GroundKind::kRough) {
    j["magnitude"] = g.magnitude;
    j["cell_width"] = g.cell_width;
    j["start_x"] = g.start_x;
    j["edge_blend"] = g.edge_blend;
    j["seed"] = g.seed;
    j["offsets"] = g.offsets;
  } else if (!g.grades.empty()) {
    auto& arr = j["grades"] = nlohmann::json::array();
    for (const GradeSegment& s : g.grades) arr.push_back({s.start_x, s.grade});
  }
}

void from_json(const nlohmann::json& j, GroundProfile& g) {
  g = GroundProfile{};
  g.kind = ground_kind_from_string(j.at("kind").get<std::string>());
  if (g.kind == GroundKind::kRough) {
    g.magnitude = j.at("magnitude").get<double>();
    g.cell_width = j.value("cell_width", g.cell_width);
    g.start_x = j.value("start_x", g.start_x);
    g.edge_blend = j.value("edge_blend", g.edge_blend);
    g.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("offsets")) {
      g.offsets = j["offsets"].get<std::vector<double>>();
    } else {
      const double blend = g.edge_blend;
      g = rough_ground(g.seed, g.magnitude, g.cell_width, j.value("length", 400.0), g.start_x);
      g.edge_blend = blend;
    }
  } else if (j.contains("grades")) {
    for (const auto& s : j["grades"]) g.grades.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
  }
  g.finalize();
  g.validate();
}

}  // namespace gaitbo::sim

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

#ifndef GAITBO_SIM_TERRAIN_H_
#define GAITBO_SIM_TERRAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gaitbo::sim {

enum class GroundKind { kFlat, kRough, kRampUp, kRampDown };

std::string to_string(GroundKind kind);
GroundKind ground_kind_from_string(const std::string& s);

struct GradeSegment {
  double start_x = 0.0;  // m
  double grade = 0.0;    // rise over run; negative descends

  bool operator==(const GradeSegment&) const = default;
};

// Height field y = h(x). Rough ground is piecewise constant over cells of
// cell_width starting at start_x (flat before), with a linear blend of
// edge_blend width centred on each cell boundary. Ramps integrate a grade
// schedule sorted by start_x; the grade before the first segment is zero.
struct GroundProfile {
  GroundKind kind = GroundKind::kFlat;

  double magnitude = 0.0;
  double cell_width = 0.4;
  double start_x = 1.0;
  double edge_blend = 0.05;
  std::uint64_t seed = 0;
  std::vector<double> offsets;

  std::vector<GradeSegment> grades;
  // Height at the start of each grade segment, filled by finalize().
  std::vector<double> segment_base;

  void finalize();
  // Throws ParameterError when offsets exceed magnitude, grades are not
  // monotone in magnitude, or exceed kMaxGrade.
  void validate() const;

  bool operator==(const GroundProfile& o) const {
    return kind == o.kind && magnitude == o.magnitude && cell_width == o.cell_width &&
           start_x == o.start_x && edge_blend == o.edge_blend && seed == o.seed &&
           offsets == o.offsets && grades == o.grades;
  }
};

inline constexpr double kDefaultRoughMagnitude = 0.08;
inline constexpr double kMaxGrade = 0.20;

GroundProfile flat_ground();

// Offsets are magnitude (2u - 1) with u drawn from mt19937_64(seed), one per
// cell, cells covering [start_x, start_x + length).
GroundProfile rough_ground(std::uint64_t seed, double magnitude = kDefaultRoughMagnitude,
                           double cell_width = 0.4, double length = 400.0,
                           double start_x = 1.0);

// Grade k * increment (capped at max_grade) on [k interval, (k+1) interval),
// k = 1, 2, ...; the first interval is level.
GroundProfile ramp_ground(bool up, double max_grade = kMaxGrade, double increment = 0.025,
                          double interval = 20.0);

GroundProfile single_grade(double grade, double start_x = 0.0);

double ground_height(const GroundProfile& profile, double x);

void to_json(nlohmann::json& j, const GroundProfile& g);
void from_json(const nlohmann::json& j, GroundProfile& g);

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_TERRAIN_H_

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

#ifndef GAITBO_SIM_ROLLOUT_H_
#define GAITBO_SIM_ROLLOUT_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gaitbo/control/controller.h"
#include "gaitbo/control/params.h"
#include "gaitbo/sim/dynamics.h"
#include "gaitbo/sim/model.h"
#include "gaitbo/sim/state.h"
#include "gaitbo/sim/terrain.h"

namespace gaitbo::sim {

// Starting posture: single support on the left leg, right leg early in swing.
struct InitialConditions {
  double speed = 1.2;          // m/s, forward hip velocity
  double pitch = 0.10;         // rad
  double stance_thigh = 0.15;  // rad, thigh angle from vertical, forward positive
  double stance_knee = 0.05;
  double swing_thigh = -0.30;
  double swing_knee = 0.60;
  double swing_ankle = 0.10;
  double penetration = 0.001;  // m, initial sole penetration of the stance foot
};

struct FallRule {
  double height_fraction = 0.70;  // of standing trunk-CoM height above local ground
  double max_pitch = 1.0471975511965976;  // 60 deg
};

struct SimConfig {
  PhysicsParams physics{};
  control::ControllerConfig controller = control::default_controller_config();
  InitialConditions initial{};
  FallRule fall{};
  double dt = kDefaultDt;
  double sample_interval = 0.01;  // s
  double debounce = 0.020;        // s, contact edges must persist this long
};

SimConfig default_sim_config();

// Canonical JSON of everything that affects a rollout on the undisturbed
// model; hashed for feature-store staleness checks.
nlohmann::json sim_fingerprint(const LinkSet& model, const SimConfig& config);
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t sim_config_hash(const LinkSet& model, const SimConfig& config);

void to_json(nlohmann::json& j, const SimConfig& c);
void from_json(const nlohmann::json& j, SimConfig& c);

struct Sample {
  double time = 0.0;
  Vec9 q = Vec9::Zero();
  Vec9 qd = Vec9::Zero();
  std::array<bool, 2> contact{false, false};
  Eigen::Vector2d com = Eigen::Vector2d::Zero();  // whole-body CoM

  bool operator==(const Sample&) const = default;
};

enum class EventKind { kHeelStrike, kToeOff };

struct StepEvent {
  double time = 0.0;
  Side side = kLeft;
  EventKind kind = EventKind::kHeelStrike;
  Sample snapshot;  // state at the contact edge

  bool operator==(const StepEvent&) const = default;
};

enum class Termination { kCompleted, kFell, kFault };

std::string to_string(Termination t);

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<StepEvent> events;
  Termination termination = Termination::kCompleted;
  double end_time = 0.0;
  double x_fall = 0.0;       // hip x at the fall; 0 when completed
  double final_hip_x = 0.0;
  double effort = 0.0;       // muscle work proxy, see Controller::effort
  double total_mass = 0.0;
  double gravity = 0.0;
  double min_normal_force = 0.0;
  double max_penetration = 0.0;
  std::vector<JointTorques> torques;  // per tick, when recorded

  bool fell() const { return termination != Termination::kCompleted; }
  bool operator==(const Trajectory&) const = default;
};

struct RolloutOptions {
  bool record_torques = false;
};

// Standing trunk-CoM height (upright, straight legs) above the sole.
double standing_trunk_height(const LinkSet& model);

SimState initial_state(const LinkSet& model, const SimConfig& config, const GroundProfile& ground);

// Closed-loop simulation for up to duration seconds. Ends early on a fall
// (trunk CoM below the fall-rule height, or |pitch| above max_pitch) or a
// simulation fault, which is reported as a fall at the current hip x.
Trajectory rollout(const control::PolicyParams& params, const LinkSet& model,
                   const GroundProfile& ground, double duration,
                   const SimConfig& config = default_sim_config(),
                   const RolloutOptions& options = {});

// time, q..., qd..., contact flags, CoM; then an event table.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace gaitbo::sim

#endif  // GAITBO_SIM_ROLLOUT_H_

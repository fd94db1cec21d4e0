// Copyright 2026 The dynscene Authors
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

#ifndef DYNSCENE_SIMULATOR_H_
#define DYNSCENE_SIMULATOR_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "dynscene/scene_config.h"

namespace dynscene {

struct BodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
};

// Rigid state of every object at one instant, in config order.
using RigidState = std::vector<BodyState>;

struct TraceFrame {
  double time = 0.0;
  RigidState bodies;
};

enum class ContactKind { kObjectGround, kObjectObject };

struct ContactEvent {
  double time = 0.0;
  ContactKind kind = ContactKind::kObjectGround;
  // One name for ground contacts, two (config order) for pairs.
  std::vector<std::string> participants;
  double impulse = 0.0;  // N*s, total normal impulse at onset
};

struct SimTrace {
  SceneConfig config;
  int fps = 30;
  int substeps = 8;
  std::vector<TraceFrame> frames;
  std::vector<ContactEvent> contacts;  // sorted by time
};

// Per-contact diagnostics reported after each velocity solve.
struct ContactSample {
  int body_a = -1;  // -1 for the ground
  int body_b = -1;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  // Tangential relative velocity (b relative to a) before the solve.
  Eigen::Vector3d tangential_velocity = Eigen::Vector3d::Zero();
  // Friction impulse applied to body b.
  Eigen::Vector3d friction_impulse = Eigen::Vector3d::Zero();
  double normal_impulse = 0.0;
};

struct SimOptions {
  double duration = 1.0;
  int fps = 30;
  int substeps = 8;
  double restitution = 0.0;
  int solver_iterations = 24;
  double baumgarte = 0.2;
  double slop = 1e-3;
  // Optional observer, called once per substep with every solved contact.
  std::function<void(double time, const std::vector<ContactSample>&)> on_contacts;
};

// Runs the rollout: the static world (geometry, mass, friction, gravity) is
// built first, then initial poses and velocities are written into the
// engine state. Throws ConfigError for an invalid config and DivergenceError
// when any body leaves a 1e4 m radius.
SimTrace Simulate(const SceneConfig& config, const SimOptions& options = {});

// Object pairs (and object/"ground" pairs) that interpenetrate by more than
// 1e-4 m in the initial configuration.
std::vector<std::pair<std::string, std::string>> DetectInitialOverlap(
    const SceneConfig& config);

inline constexpr const char* kGroundName = "ground";

// Total kinetic plus gravitational potential energy of a state.
double TotalEnergy(const SceneConfig& config, const RigidState& state);

// Trace dump: magic "DTRC", u32 object count, u32 frame count, then each
// name as u32 length + bytes, then per frame a f64 time followed by 13 f64
// per object (position, quaternion w x y z, linear velocity, angular
// velocity). Little-endian.
void WriteTrace(const SimTrace& trace, const std::string& path);
// Reads back frames and names; contacts are not part of the dump.
struct TraceDump {
  std::vector<std::string> names;
  std::vector<TraceFrame> frames;
};
TraceDump ReadTrace(const std::string& path);

}  // namespace dynscene

#endif  // DYNSCENE_SIMULATOR_H_

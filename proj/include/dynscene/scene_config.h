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

#ifndef DYNSCENE_SCENE_CONFIG_H_
#define DYNSCENE_SCENE_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dynscene {

enum class Shape { kSphere, kBox, kCylinder };

std::string_view ShapeName(Shape shape);
std::optional<Shape> ShapeFromName(std::string_view name);

struct ObjectState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  // Unit quaternion; serialized as [w, x, y, z].
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
};

struct PhysicsSpec {
  double mass = 1.0;
  // friction: [slide, roll]
  double slide_friction = 0.5;
  double roll_friction = 0.0;
  // Signed base-10 exponent of the linear drag coefficient.
  double damping = -4.0;
};

// One primitive. Only the geometry fields relevant to `shape` are
// meaningful: sphere uses radius; cylinder uses radius and height (full
// length along its local z axis); box uses size (half-extents).
struct ObjectSpec {
  Shape shape = Shape::kSphere;
  std::string name;
  double radius = 0.0;
  double height = 0.0;
  Eigen::Vector3d size = Eigen::Vector3d::Zero();
  ObjectState state;
  PhysicsSpec physics;
};

// The camera sits at (0, -2, h) looking along +y, pitched down by
// `pitch_deg`. `position` is stored as written so validation can report a
// misplaced camera instead of silently discarding x and y.
struct CameraSpec {
  Eigen::Vector3d position{0.0, -2.0, 3.0};
  double pitch_deg = 45.0;
  double fovy_deg = 45.0;

  double height() const { return position.z(); }
};

struct GravitySpec {
  Eigen::Vector3d vector{0.0, 0.0, -9.81};
};

struct SceneConfig {
  std::vector<ObjectSpec> objects;
  CameraSpec camera;
  GravitySpec gravity;

  const ObjectSpec* Find(std::string_view name) const;
  int IndexOf(std::string_view name) const;
};

// Exact field-wise equality (quaternions compared component-wise).
bool operator==(const ObjectSpec& a, const ObjectSpec& b);
bool operator==(const SceneConfig& a, const SceneConfig& b);

// Field-wise comparison with absolute tolerance `abs_tol` plus relative
// tolerance `rel_tol` scaled by the larger magnitude. Shapes and names must
// match exactly.
bool ApproxEqual(const SceneConfig& a, const SceneConfig& b, double abs_tol,
                 double rel_tol = 0.0);

struct ValidationOptions {
  int max_objects = 6;
};

struct Violation {
  std::string path;
  std::string rule;
};

// Empty iff every invariant of the configuration holds.
std::vector<Violation> Validate(const SceneConfig& config,
                                const ValidationOptions& options = {});

// Parses and validates a scene document. Throws SyntaxError, SchemaError or
// DomainError. Quaternions are normalized to unit length.
SceneConfig ParseConfig(std::string_view text,
                        const ValidationOptions& options = {});

// Canonical text: fixed key order, 6 significant digits, 2-space indent.
std::string SerializeConfig(const SceneConfig& config);

// The config as it reads back from its own serialization: a fixed point of
// parse(serialize(.)), so writing and re-reading it loses nothing.
SceneConfig Canonicalize(const SceneConfig& config);

struct AnswerParts {
  std::optional<std::string> reasoning;
  std::string config_text;
};

// Splits model output into the <think> and <answer> spans. Throws TagError.
AnswerParts ExtractAnswer(std::string_view text);

// Builds "<think>...</think>\n\n<answer>...</answer>" (or only the answer
// block when `reasoning` is empty).
std::string FormatTarget(const std::optional<std::string>& reasoning,
                         std::string_view config_text);

// Linguistic position bins. x and y share the seven thresholds
// (-2, -1, -0.5, 0.5, 1, 2), each bin closed on the left.
std::string_view DiscretizeX(double x);
std::string_view DiscretizeY(double y);
std::string_view DiscretizeZ(double z);

// Numeric field access by dotted key path, e.g. "objects.0.physics.mass",
// "objects.1.state.position.2", "camera.fovy", "gravity.2". Throws
// SchemaError for an unknown path.
double GetField(const SceneConfig& config, std::string_view path);
void SetField(SceneConfig& config, std::string_view path, double value);

// Applies `path=value` assignments, re-normalizes quaternions and
// re-validates. Throws SchemaError / DomainError.
SceneConfig ApplyEdits(const SceneConfig& config,
                       const std::vector<std::string>& assignments);

}  // namespace dynscene

#endif  // DYNSCENE_SCENE_CONFIG_H_

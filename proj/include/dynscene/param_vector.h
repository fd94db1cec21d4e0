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

#ifndef DYNSCENE_PARAM_VECTOR_H_
#define DYNSCENE_PARAM_VECTOR_H_

#include <string>
#include <vector>

#include "dynscene/scene_config.h"

namespace dynscene {

// What a slot of the flat vector holds.
enum class SlotKind {
  kRadius,
  kHeight,
  kSize,
  kAngularVelocity,
  kLinearVelocity,
  kOrientation,
  kPosition,
  kSlideFriction,
  kRollFriction,
  kMass,
  kDamping,
  kCameraHeight,
  kCameraPitch,
  kCameraFovy,
  kGravityZ,
};

struct ParamSlot {
  int object = -1;  // -1 for camera / gravity slots
  SlotKind kind = SlotKind::kRadius;
  int component = 0;
  std::string path;  // key path understood by GetField/SetField
};

struct ObjectHeader {
  Shape shape = Shape::kSphere;
  std::string name;
};

// Everything about a configuration that is not a real-valued parameter.
struct ParamLayout {
  std::vector<ObjectHeader> objects;
  std::vector<ParamSlot> slots;
};

struct ParamVector {
  std::vector<double> values;
  ParamLayout layout;
  // Slots a search must leave untouched.
  std::vector<bool> frozen;
};

// Slot order: for each object geometry, then state (angular velocity,
// linear velocity, orientation [w,x,y,z], position), then physics (slide
// friction, roll friction, mass, damping); then camera (height, pitch,
// fovy); then gravity z. A box contributes 20 slots, a cylinder 19 and a
// sphere 18.
ParamVector FlattenParameters(const SceneConfig& config);

// Inverse of FlattenParameters; quaternion slots are re-normalized (a zero
// quaternion becomes the identity). Throws LayoutError.
SceneConfig UnflattenParameters(const ParamVector& params);

int SlotsPerObject(Shape shape);

}  // namespace dynscene

#endif  // DYNSCENE_PARAM_VECTOR_H_

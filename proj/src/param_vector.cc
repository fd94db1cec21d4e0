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

#include "dynscene/param_vector.h"

#include <cmath>

#include "dynscene/errors.h"

namespace dynscene {
namespace {

std::vector<ParamSlot> ObjectSlots(int index, Shape shape) {
  const std::string p = "objects." + std::to_string(index) + ".";
  std::vector<ParamSlot> slots;
  auto add = [&](SlotKind kind, int component, std::string path) {
    slots.push_back({index, kind, component, p + path});
  };
  switch (shape) {
    case Shape::kSphere:
      add(SlotKind::kRadius, 0, "radius");
      break;
    case Shape::kCylinder:
      add(SlotKind::kRadius, 0, "radius");
      add(SlotKind::kHeight, 0, "height");
      break;
    case Shape::kBox:
      for (int k = 0; k < 3; ++k) add(SlotKind::kSize, k, "size." + std::to_string(k));
      break;
  }
  for (int k = 0; k < 3; ++k) {
    add(SlotKind::kAngularVelocity, k, "state.angular_velocity." + std::to_string(k));
  }
  for (int k = 0; k < 3; ++k) {
    add(SlotKind::kLinearVelocity, k, "state.linear_velocity." + std::to_string(k));
  }
  for (int k = 0; k < 4; ++k) {
    add(SlotKind::kOrientation, k, "state.orientation." + std::to_string(k));
  }
  for (int k = 0; k < 3; ++k) {
    add(SlotKind::kPosition, k, "state.position." + std::to_string(k));
  }
  add(SlotKind::kSlideFriction, 0, "physics.friction.0");
  add(SlotKind::kRollFriction, 0, "physics.friction.1");
  add(SlotKind::kMass, 0, "physics.mass");
  add(SlotKind::kDamping, 0, "physics.damping");
  return slots;
}

std::vector<ParamSlot> GlobalSlots() {
  return {
      {-1, SlotKind::kCameraHeight, 0, "camera.position.2"},
      {-1, SlotKind::kCameraPitch, 0, "camera.orientation"},
      {-1, SlotKind::kCameraFovy, 0, "camera.fovy"},
      {-1, SlotKind::kGravityZ, 0, "gravity.2"},
  };
}

std::vector<ParamSlot> ExpectedSlots(const std::vector<ObjectHeader>& objects) {
  std::vector<ParamSlot> slots;
  for (size_t i = 0; i < objects.size(); ++i) {
    auto s = ObjectSlots(static_cast<int>(i), objects[i].shape);
    slots.insert(slots.end(), s.begin(), s.end());
  }
  auto g = GlobalSlots();
  slots.insert(slots.end(), g.begin(), g.end());
  return slots;
}

}  // namespace

int SlotsPerObject(Shape shape) {
  return static_cast<int>(ObjectSlots(0, shape).size());
}

ParamVector FlattenParameters(const SceneConfig& config) {
  ParamVector out;
  for (const ObjectSpec& obj : config.objects) {
    out.layout.objects.push_back({obj.shape, obj.name});
  }
  out.layout.slots = ExpectedSlots(out.layout.objects);
  out.values.reserve(out.layout.slots.size());
  for (const ParamSlot& slot : out.layout.slots) {
    out.values.push_back(GetField(config, slot.path));
  }
  out.frozen.assign(out.values.size(), false);
  return out;
}

SceneConfig UnflattenParameters(const ParamVector& params) {
  const auto& layout = params.layout;
  if (layout.slots.size() != params.values.size()) {
    throw LayoutError("layout has " + std::to_string(layout.slots.size()) +
                      " slots but " + std::to_string(params.values.size()) +
                      " values");
  }
  const auto expected = ExpectedSlots(layout.objects);
  if (expected.size() != layout.slots.size()) {
    throw LayoutError("slot count does not match the object headers");
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (expected[i].path != layout.slots[i].path) {
      throw LayoutError("slot " + std::to_string(i) + " is '" +
                        layout.slots[i].path + "', expected '" +
                        expected[i].path + "'");
    }
  }

  SceneConfig config;
  for (const ObjectHeader& h : layout.objects) {
    ObjectSpec obj;
    obj.shape = h.shape;
    obj.name = h.name;
    config.objects.push_back(obj);
  }
  config.camera.position = {0.0, -2.0, 0.0};
  config.gravity.vector = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < params.values.size(); ++i) {
    SetField(config, layout.slots[i].path, params.values[i]);
  }
  for (ObjectSpec& obj : config.objects) {
    Eigen::Quaterniond& q = obj.state.orientation;
    const double norm = q.norm();
    if (norm < 1e-12) {
      q = Eigen::Quaterniond::Identity();
    } else if (std::abs(norm - 1.0) > 1e-12) {
      q.normalize();
    }
  }
  return config;
}

}  // namespace dynscene

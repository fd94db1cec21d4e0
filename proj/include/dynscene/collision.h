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

#ifndef DYNSCENE_COLLISION_H_
#define DYNSCENE_COLLISION_H_

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "dynscene/scene_config.h"

namespace dynscene {

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  static Pose From(const Eigen::Vector3d& p, const Eigen::Quaterniond& q) {
    return {p, q.toRotationMatrix()};
  }
  Eigen::Vector3d ToWorld(const Eigen::Vector3d& local) const {
    return rotation * local + position;
  }
  Eigen::Vector3d ToLocal(const Eigen::Vector3d& world) const {
    return rotation.transpose() * (world - position);
  }
};

// A convex primitive in its body frame, centered at the origin. Cylinders
// have their axis along local z.
class ConvexShape {
 public:
  static ConvexShape Sphere(double radius);
  static ConvexShape Box(const Eigen::Vector3d& half_extents);
  static ConvexShape Cylinder(double radius, double half_height);
  static ConvexShape FromSpec(const ObjectSpec& spec);

  Shape kind() const { return kind_; }
  double radius() const { return radius_; }
  double half_height() const { return half_height_; }
  const Eigen::Vector3d& half_extents() const { return half_extents_; }

  // Farthest point of the full shape along `dir` (body frame).
  Eigen::Vector3d Support(const Eigen::Vector3d& dir) const;
  // Same for the shape with its rounding margin removed: a sphere reduces
  // to its center, other primitives are their own core.
  Eigen::Vector3d CoreSupport(const Eigen::Vector3d& dir) const;
  double margin() const { return kind_ == Shape::kSphere ? radius_ : 0.0; }

  double BoundingRadius() const;
  // Radius used for rolling resistance and surface-speed estimates.
  double RollingRadius() const;
  // Principal moments of inertia for a solid body of the given mass.
  Eigen::Vector3d Inertia(double mass) const;

  // Nearest ray parameter t > t_min where origin + t * dir enters the
  // shape, in body coordinates.
  std::optional<double> Raycast(const Eigen::Vector3d& origin,
                                const Eigen::Vector3d& dir,
                                double t_min = 1e-9) const;

 private:
  Shape kind_ = Shape::kSphere;
  double radius_ = 0.0;
  double half_height_ = 0.0;
  Eigen::Vector3d half_extents_ = Eigen::Vector3d::Zero();
};

// One contact point. `normal` points from the first body toward the
// second; `separation` is negative when the bodies interpenetrate.
struct ContactPoint {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double separation = 0.0;
};

// Points of `shape` within `margin` of the ground plane z = 0. The normal is
// +z (ground toward body).
std::vector<ContactPoint> GroundContacts(const ConvexShape& shape,
                                         const Pose& pose, double margin);

// Lowest point of the shape above the plane z = 0 (negative if below).
double GroundClearance(const ConvexShape& shape, const Pose& pose);

struct DistanceResult {
  // Signed distance: positive gap or negative penetration depth.
  double distance = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitX();  // from A toward B
  Eigen::Vector3d point_a = Eigen::Vector3d::Zero();
  Eigen::Vector3d point_b = Eigen::Vector3d::Zero();
};

// GJK distance between the shapes, with EPA for the penetrating case.
DistanceResult ShapeDistance(const ConvexShape& a, const Pose& pose_a,
                             const ConvexShape& b, const Pose& pose_b);

// Contact between two bodies when their signed distance is below `margin`.
std::optional<ContactPoint> ShapeContact(const ConvexShape& a,
                                         const Pose& pose_a,
                                         const ConvexShape& b,
                                         const Pose& pose_b, double margin);

}  // namespace dynscene

#endif  // DYNSCENE_COLLISION_H_

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

#ifndef DYNSCENE_CAMERA_H_
#define DYNSCENE_CAMERA_H_

#include <optional>

#include <Eigen/Core>

#include "dynscene/scene_config.h"

namespace dynscene {

inline constexpr int kDefaultWidth = 480;
inline constexpr int kDefaultHeight = 320;

// Pinhole camera looking along +y, tilted down by the pitch angle. Camera
// axes: x right, y down, z forward. Pixel (i, j) covers [i, i+1) x [j, j+1).
struct CameraModel {
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  double focal_px = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  // Rows are the camera axes expressed in world coordinates.
  Eigen::Matrix3d world_to_camera = Eigen::Matrix3d::Identity();

  Eigen::Vector3d ToCamera(const Eigen::Vector3d& world) const {
    return world_to_camera * (world - position);
  }
  // Image coordinates of a world point, or nullopt when it is not in front
  // of the camera.
  std::optional<Eigen::Vector2d> Project(const Eigen::Vector3d& world) const;
  // World-space ray direction through image point (u, v), scaled so that
  // its forward component is 1: position + t * Ray(u, v) has depth t.
  Eigen::Vector3d Ray(double u, double v) const;
};

CameraModel BuildCamera(const CameraSpec& spec, int width = kDefaultWidth,
                        int height = kDefaultHeight);

}  // namespace dynscene

#endif  // DYNSCENE_CAMERA_H_

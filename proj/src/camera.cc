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

#include "dynscene/camera.h"

#include <cmath>

namespace dynscene {

namespace {
constexpr double kMinDepth = 1e-9;
constexpr double kDegToRad = M_PI / 180.0;
}  // namespace

CameraModel BuildCamera(const CameraSpec& spec, int width, int height) {
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.focal_px = (height / 2.0) / std::tan(spec.fovy_deg * kDegToRad / 2.0);
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  cam.position = spec.position;
  const double p = spec.pitch_deg * kDegToRad;
  const Eigen::Vector3d right(1.0, 0.0, 0.0);
  const Eigen::Vector3d down(0.0, -std::sin(p), -std::cos(p));
  const Eigen::Vector3d forward(0.0, std::cos(p), -std::sin(p));
  cam.world_to_camera.row(0) = right;
  cam.world_to_camera.row(1) = down;
  cam.world_to_camera.row(2) = forward;
  return cam;
}

std::optional<Eigen::Vector2d> CameraModel::Project(const Eigen::Vector3d& world) const {
  const Eigen::Vector3d c = ToCamera(world);
  if (!(c.z() > kMinDepth)) return std::nullopt;
  return Eigen::Vector2d(cx + focal_px * c.x() / c.z(), cy + focal_px * c.y() / c.z());
}

Eigen::Vector3d CameraModel::Ray(double u, double v) const {
  const Eigen::Vector3d c((u - cx) / focal_px, (v - cy) / focal_px, 1.0);
  return world_to_camera.transpose() * c;
}

}  // namespace dynscene

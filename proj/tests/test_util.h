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

#ifndef DYNSCENE_TESTS_TEST_UTIL_H_
#define DYNSCENE_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include <Eigen/Geometry>

#include "dynscene/scene_config.h"

namespace dynscene::testing {

inline std::string ReadFileText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string TestDataPath(const std::string& name) {
  return std::string(DYNSCENE_TEST_DATA_DIR) + "/" + name;
}

inline SceneConfig AppendixConfig() {
  return ParseConfig(ReadFileText(TestDataPath("appendix_example.yaml")));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path MakeTempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dynscene_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline ObjectSpec Sphere(const std::string& name, double radius,
                         const Eigen::Vector3d& position,
                         const Eigen::Vector3d& velocity = Eigen::Vector3d::Zero()) {
  ObjectSpec o;
  o.shape = Shape::kSphere;
  o.name = name;
  o.radius = radius;
  o.state.position = position;
  o.state.linear_velocity = velocity;
  o.physics.mass = 1.0;
  o.physics.slide_friction = 0.5;
  o.physics.roll_friction = 0.1;
  o.physics.damping = -9.0;
  return o;
}

inline ObjectSpec Box(const std::string& name, const Eigen::Vector3d& half_extents,
                      const Eigen::Vector3d& position,
                      const Eigen::Vector3d& velocity = Eigen::Vector3d::Zero()) {
  ObjectSpec o;
  o.shape = Shape::kBox;
  o.name = name;
  o.size = half_extents;
  o.state.position = position;
  o.state.linear_velocity = velocity;
  o.physics.mass = 1.0;
  o.physics.slide_friction = 0.5;
  o.physics.roll_friction = 0.1;
  o.physics.damping = -9.0;
  return o;
}

inline ObjectSpec Cylinder(const std::string& name, double radius, double height,
                           const Eigen::Vector3d& position) {
  ObjectSpec o;
  o.shape = Shape::kCylinder;
  o.name = name;
  o.radius = radius;
  o.height = height;
  o.state.position = position;
  o.physics.mass = 1.0;
  o.physics.slide_friction = 0.5;
  o.physics.roll_friction = 0.1;
  o.physics.damping = -9.0;
  return o;
}

inline SceneConfig SceneWith(std::vector<ObjectSpec> objects, double gz = -9.81) {
  SceneConfig c;
  c.objects = std::move(objects);
  c.camera.position = {0.0, -2.0, 3.0};
  c.camera.pitch_deg = 45.0;
  c.camera.fovy_deg = 45.0;
  c.gravity.vector = {0.0, 0.0, gz};
  return c;
}

// Random valid config for property tests; values are arbitrary doubles, not
// rounded to any precision.
inline SceneConfig RandomConfig(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto range = [&](double a, double b) { return a + (b - a) * u(rng); };
  SceneConfig c;
  const int n = 1 + static_cast<int>(u(rng) * 6.0) % 6;
  for (int i = 0; i < n; ++i) {
    ObjectSpec o;
    const int kind = static_cast<int>(u(rng) * 3.0) % 3;
    o.shape = kind == 0 ? Shape::kSphere : kind == 1 ? Shape::kBox : Shape::kCylinder;
    o.name = "obj_" + std::to_string(i);
    o.radius = range(0.05, 2.0);
    o.height = range(0.05, 2.0);
    o.size = {range(0.05, 2.0), range(0.05, 2.0), range(0.05, 2.0)};
    if (o.shape == Shape::kBox) o.radius = 0.0;
    if (o.shape != Shape::kCylinder) o.height = 0.0;
    if (o.shape != Shape::kBox) o.size.setZero();
    Eigen::Quaterniond q(range(-1, 1), range(-1, 1), range(-1, 1), range(-1, 1));
    if (q.norm() < 1e-3) q = Eigen::Quaterniond::Identity();
    o.state.orientation = q.normalized();
    o.state.position = {range(-10, 10), range(-10, 10), range(0, 5)};
    o.state.linear_velocity = {range(-5, 5), range(-5, 5), range(-5, 5)};
    o.state.angular_velocity = {range(-5, 5), range(-5, 5), range(-5, 5)};
    o.physics.mass = range(0.1, 10.0);
    o.physics.slide_friction = range(0.0, 2.0);
    o.physics.roll_friction = range(0.0, 1.0);
    o.physics.damping = range(-9.0, 1.0);
    c.objects.push_back(o);
  }
  c.camera.position = {0.0, -2.0, range(0.5, 6.0)};
  c.camera.pitch_deg = range(-80.0, 80.0);
  c.camera.fovy_deg = range(10.0, 170.0);
  c.gravity.vector = {0.0, 0.0, range(-20.0, -0.1)};
  return c;
}

}  // namespace dynscene::testing

#endif  // DYNSCENE_TESTS_TEST_UTIL_H_

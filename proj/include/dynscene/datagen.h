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

#ifndef DYNSCENE_DATAGEN_H_
#define DYNSCENE_DATAGEN_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynscene/renderer.h"
#include "dynscene/scene_config.h"
#include "dynscene/simulator.h"

namespace dynscene {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct SamplingRanges {
  Range radius{0.1, 0.5};
  Range cylinder_height{0.2, 1.0};
  Range half_extent{0.1, 1.0};
  Range mass{0.2, 3.0};
  Range slide_friction{0.1, 1.2};
  Range roll_friction{0.0, 0.5};
  Range damping{-9.0, 0.0};
  Range position_x{-5.0, 5.0};
  Range position_y{-1.0, 4.0};
  // Gap between the lowest point of an object and the ground.
  Range clearance{0.0, 1.0};
  double max_speed = 5.0;  // bound on the horizontal speed
  Range velocity_z{-1.0, 1.0};
  Range angular_velocity{-3.0, 3.0};
  double upright_probability = 0.5;
  Range camera_height{1.5, 4.0};
  Range pitch{20.0, 70.0};
  Range fovy{35.0, 60.0};
  Range gravity_z{-12.0, -4.0};
  std::vector<double> object_count_weights{1.0, 1.0, 1.0, 1.0};
  std::map<Shape, double> shape_weights{
      {Shape::kSphere, 1.0}, {Shape::kBox, 1.0}, {Shape::kCylinder, 1.0}};
  bool holdout = true;
  // Sorted shape multisets that are never sampled while `holdout` is on.
  std::vector<std::vector<Shape>> held_out;
};

// Parses a ranges document; missing keys keep their defaults. Throws
// SyntaxError, SchemaError or DomainError (min > max and similar).
SamplingRanges ParseSamplingRanges(const std::string& yaml_text);
const SamplingRanges& DefaultSamplingRanges();

// Draws a scene. The result is canonical (see Canonicalize) and never
// matches a held-out combination when the holdout flag is on.
SceneConfig SampleConfig(const SamplingRanges& ranges, uint64_t seed);

// Sorted shape multiset of a config.
std::vector<Shape> ShapeCombination(const SceneConfig& config);

// Seed of record i under a master seed (splitmix64 of master + (i+1)*golden).
uint64_t DeriveSeed(uint64_t master_seed, uint64_t index);

inline constexpr int kMinVisiblePixels = 8000;

struct FilterResult {
  bool accepted = true;
  std::string reason;  // "overlap", "out_of_view" or "too_small"
};

// The three rejection rules in order: initial overlap, more than one object
// never visible, a visible object whose peak pixel count stays below 8000.
FilterResult FilterScene(const SceneConfig& config, const Visibility& visibility);

struct DatasetRecord {
  int index = 0;  // attempt index
  uint64_t seed = 0;
  bool accepted = false;
  std::string reason;
  std::string id;  // scene directory name, accepted records only
  std::string config_path;
  std::vector<std::string> mask_paths;
  std::vector<std::string> flow_paths;
  std::string events_path;
  std::string description_path;
  std::string target_path;
  std::string description;
  std::string mask_hash;  // SHA-256 over all mask files in frame order
};

struct GenerateOptions {
  SimOptions sim;
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  // Attempts allowed per requested scene before giving up.
  int max_attempts_per_scene = 200;
  std::function<void(const DatasetRecord&)> on_record;
};

struct Manifest {
  std::vector<DatasetRecord> records;
  int accepted = 0;
  std::map<std::string, int> rejections;
  std::string content_hash;
};

// Samples, simulates, renders and filters scenes until `n` are accepted.
// Every attempt, accepted or not, is listed in out_dir/manifest.ndjson,
// followed by a content-hash line. Throws IoError.
Manifest GenerateDataset(int n, const SamplingRanges& ranges, const std::string& out_dir,
                         uint64_t master_seed, const GenerateOptions& options = {});

// Everything produced for one accepted attempt, kept in memory.
struct SceneArtifacts {
  SceneConfig config;
  SimTrace trace;
  SceneRender render;
  Visibility visibility;
  FilterResult filter;
};

SceneArtifacts BuildScene(const SceneConfig& config, const GenerateOptions& options = {});

// Checks a dataset directory: manifest hash, every listed path exists, every
// config re-parses, and (when `rerender` is set) masks re-render to the
// recorded hash and accepted scenes pass the filters. Returns problems found.
std::vector<std::string> ValidateDataset(const std::string& out_dir, bool rerender = true);

// Hex SHA-256 of a byte string.
std::string Sha256Hex(const std::string& bytes);

}  // namespace dynscene

#endif  // DYNSCENE_DATAGEN_H_

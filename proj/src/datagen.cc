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

#include "dynscene/datagen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "dynscene/camera.h"
#include "dynscene/collision.h"
#include "dynscene/embedded_data.h"
#include "dynscene/errors.h"
#include "dynscene/event_mining.h"
#include "dynscene/image_io.h"

namespace dynscene {
namespace {

namespace fs = std::filesystem;
using Eigen::Quaterniond;
using Eigen::Vector3d;
using json = nlohmann::ordered_json;

constexpr char kManifestName[] = "manifest.ndjson";

// ---------------------------------------------------------------------------
// Ranges file.

Range ReadRange(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() != 2) {
    throw SchemaError("'" + key + "' must be a [min, max] pair");
  }
  Range r{node[0].as<double>(), node[1].as<double>()};
  if (!(r.min <= r.max)) throw DomainError("'" + key + "' has min > max");
  return r;
}

template <typename Fn>
void ForEachKey(const YAML::Node& node, const std::string& where, Fn&& fn) {
  if (!node.IsMap()) throw SchemaError("'" + where + "' must be a mapping");
  for (const auto& entry : node) {
    const std::string key = entry.first.as<std::string>();
    if (!fn(key, entry.second)) throw SchemaError("unknown key '" + where + "." + key + "'");
  }
}

void CheckRanges(const SamplingRanges& r) {
  auto positive = [](const Range& range, const char* name) {
    if (!(range.min > 0.0)) throw DomainError(std::string(name) + " must be positive");
  };
  positive(r.radius, "radius");
  positive(r.cylinder_height, "cylinder_height");
  positive(r.half_extent, "half_extent");
  positive(r.mass, "mass");
  positive(r.camera_height, "camera height");
  if (r.slide_friction.min < 0.0 || r.roll_friction.min < 0.0) {
    throw DomainError("friction ranges must be non-negative");
  }
  if (r.clearance.min < 0.0) throw DomainError("clearance must be non-negative");
  if (!(r.gravity_z.max < 0.0)) throw DomainError("gravity_z must be negative");
  if (!(r.pitch.min > -90.0 && r.pitch.max < 90.0)) throw DomainError("pitch out of range");
  if (!(r.fovy.min > 0.0 && r.fovy.max < 180.0)) throw DomainError("fovy out of range");
  if (!(r.max_speed >= 0.0)) throw DomainError("max_speed must be non-negative");
  if (r.upright_probability < 0.0 || r.upright_probability > 1.0) {
    throw DomainError("upright_probability must lie in [0, 1]");
  }
  if (r.object_count_weights.empty() || r.object_count_weights.size() > 6) {
    throw DomainError("object_count_weights needs 1 to 6 entries");
  }
  double total = 0.0;
  for (double w : r.object_count_weights) {
    if (w < 0.0) throw DomainError("negative object count weight");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("object count weights sum to zero");
  double shape_total = 0.0;
  for (const auto& [shape, w] : r.shape_weights) {
    if (w < 0.0) throw DomainError("negative shape weight");
    shape_total += w;
  }
  if (!(shape_total > 0.0)) throw DomainError("shape weights sum to zero");
}

// ---------------------------------------------------------------------------
// Sampling helpers.

double Uniform(std::mt19937_64& rng, const Range& r) {
  if (r.min == r.max) return r.min;
  return std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

// Shoemake's uniform random rotation.
Quaterniond RandomRotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(rng), u2 = u(rng), u3 = u(rng);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  return Quaterniond(b * std::cos(2 * M_PI * u3), a * std::sin(2 * M_PI * u2),
                     a * std::cos(2 * M_PI * u2), b * std::sin(2 * M_PI * u3));
}

Shape DrawShape(std::mt19937_64& rng, const SamplingRanges& ranges) {
  std::vector<Shape> shapes;
  std::vector<double> weights;
  for (const auto& [shape, w] : ranges.shape_weights) {
    shapes.push_back(shape);
    weights.push_back(w);
  }
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  return shapes[pick(rng)];
}

bool IsHeldOut(std::vector<Shape> shapes, const SamplingRanges& ranges) {
  if (!ranges.holdout) return false;
  std::sort(shapes.begin(), shapes.end());
  for (std::vector<Shape> combo : ranges.held_out) {
    std::sort(combo.begin(), combo.end());
    if (combo == shapes) return true;
  }
  return false;
}

std::string Hex(const unsigned char* bytes, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    out += digits[bytes[i] >> 4];
    out += digits[bytes[i] & 15];
  }
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FrameName(int k, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03d.%s", k, ext);
  return buf;
}

std::string MaskBytes(const IdMap& mask) {
  std::string out =
      "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(mask.ids.data()), mask.ids.size());
  return out;
}

std::string MaskHash(const SceneRender& render) {
  std::string all;
  for (const FrameArtifacts& f : render.frames) all += MaskBytes(f.id_map);
  return Sha256Hex(all);
}

json RecordJson(const DatasetRecord& r) {
  json j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["status"] = r.accepted ? "accepted" : "rejected";
  if (!r.accepted) {
    j["reason"] = r.reason;
    return j;
  }
  j["id"] = r.id;
  j["config"] = r.config_path;
  j["masks"] = r.mask_paths;
  j["flow"] = r.flow_paths;
  j["events"] = r.events_path;
  j["description"] = r.description_path;
  j["target"] = r.target_path;
  j["mask_hash"] = r.mask_hash;
  return j;
}

}  // namespace

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  return Hex(digest, len);
}

SamplingRanges ParseSamplingRanges(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SyntaxError(std::string("ranges: ") + e.what());
  }
  SamplingRanges r;
  if (root.IsNull()) return r;
  try {
    ForEachKey(root, "ranges", [&](const std::string& key, const YAML::Node& v) {
      if (key == "geometry") {
        ForEachKey(v, key, [&](const std::string& k, const YAML::Node& x) {
          if (k == "radius") r.radius = ReadRange(x, k);
          else if (k == "cylinder_height") r.cylinder_height = ReadRange(x, k);
          else if (k == "half_extent") r.half_extent = ReadRange(x, k);
          else return false;
          return true;
        });
      } else if (key == "physics") {
        ForEachKey(v, key, [&](const std::string& k, const YAML::Node& x) {
          if (k == "mass") r.mass = ReadRange(x, k);
          else if (k == "slide_friction") r.slide_friction = ReadRange(x, k);
          else if (k == "roll_friction") r.roll_friction = ReadRange(x, k);
          else if (k == "damping") r.damping = ReadRange(x, k);
          else return false;
          return true;
        });
      } else if (key == "state") {
        ForEachKey(v, key, [&](const std::string& k, const YAML::Node& x) {
          if (k == "position_x") r.position_x = ReadRange(x, k);
          else if (k == "position_y") r.position_y = ReadRange(x, k);
          else if (k == "clearance") r.clearance = ReadRange(x, k);
          else if (k == "max_speed") r.max_speed = x.as<double>();
          else if (k == "velocity_z") r.velocity_z = ReadRange(x, k);
          else if (k == "angular_velocity") r.angular_velocity = ReadRange(x, k);
          else if (k == "upright_probability") r.upright_probability = x.as<double>();
          else return false;
          return true;
        });
      } else if (key == "camera") {
        ForEachKey(v, key, [&](const std::string& k, const YAML::Node& x) {
          if (k == "height") r.camera_height = ReadRange(x, k);
          else if (k == "pitch") r.pitch = ReadRange(x, k);
          else if (k == "fovy") r.fovy = ReadRange(x, k);
          else return false;
          return true;
        });
      } else if (key == "gravity_z") {
        r.gravity_z = ReadRange(v, key);
      } else if (key == "object_count_weights") {
        r.object_count_weights = v.as<std::vector<double>>();
      } else if (key == "shape_weights") {
        r.shape_weights.clear();
        ForEachKey(v, key, [&](const std::string& k, const YAML::Node& x) {
          const auto shape = ShapeFromName(k);
          if (!shape) return false;
          r.shape_weights[*shape] = x.as<double>();
          return true;
        });
      } else if (key == "holdout") {
        r.holdout = v.as<bool>();
      } else if (key == "held_out") {
        r.held_out.clear();
        for (const auto& combo : v) {
          std::vector<Shape> shapes;
          for (const auto& name : combo) {
            const auto shape = ShapeFromName(name.as<std::string>());
            if (!shape) throw SchemaError("unknown shape '" + name.as<std::string>() + "'");
            shapes.push_back(*shape);
          }
          std::sort(shapes.begin(), shapes.end());
          r.held_out.push_back(shapes);
        }
      } else {
        return false;
      }
      return true;
    });
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("ranges: ") + e.what());
  }
  CheckRanges(r);
  return r;
}

const SamplingRanges& DefaultSamplingRanges() {
  static const SamplingRanges ranges =
      ParseSamplingRanges(std::string(embedded::DefaultSamplingRanges()));
  return ranges;
}

std::vector<Shape> ShapeCombination(const SceneConfig& config) {
  std::vector<Shape> out;
  for (const ObjectSpec& o : config.objects) out.push_back(o.shape);
  std::sort(out.begin(), out.end());
  return out;
}

uint64_t DeriveSeed(uint64_t master_seed, uint64_t index) {
  uint64_t x = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SceneConfig SampleConfig(const SamplingRanges& ranges, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::discrete_distribution<int> count_dist(ranges.object_count_weights.begin(),
                                             ranges.object_count_weights.end());
  const int count = count_dist(rng) + 1;
  std::vector<Shape> shapes;
  for (int attempt = 0;; ++attempt) {
    shapes.clear();
    for (int i = 0; i < count; ++i) shapes.push_back(DrawShape(rng, ranges));
    if (!IsHeldOut(shapes, ranges)) break;
    if (attempt > 1000) throw DomainError("every shape combination is held out");
  }

  SceneConfig config;
  std::map<Shape, int> per_shape;
  for (Shape shape : shapes) {
    ObjectSpec obj;
    obj.shape = shape;
    obj.name = std::string(ShapeName(shape)) + "_" + std::to_string(per_shape[shape]++);
    switch (shape) {
      case Shape::kSphere:
        obj.radius = Uniform(rng, ranges.radius);
        break;
      case Shape::kCylinder:
        obj.radius = Uniform(rng, ranges.radius);
        obj.height = Uniform(rng, ranges.cylinder_height);
        break;
      case Shape::kBox:
        for (int k = 0; k < 3; ++k) obj.size[k] = Uniform(rng, ranges.half_extent);
        break;
    }
    const bool upright = shape != Shape::kSphere && unit(rng) < ranges.upright_probability;
    Quaterniond q;
    if (upright) {
      const double yaw = 2.0 * M_PI * unit(rng);
      q = Quaterniond(Eigen::AngleAxisd(yaw, Vector3d::UnitZ()));
      // Cylinders lie on their side half of the time.
      if (shape == Shape::kCylinder && unit(rng) < 0.5) {
        q = q * Quaterniond(Eigen::AngleAxisd(M_PI / 2.0, Vector3d::UnitX()));
      }
    } else {
      q = RandomRotation(rng);
    }
    obj.state.orientation = q.normalized();
    obj.state.position.x() = Uniform(rng, ranges.position_x);
    obj.state.position.y() = Uniform(rng, ranges.position_y);
    const double lowest = GroundClearance(ConvexShape::FromSpec(obj),
                                          Pose::From(Vector3d::Zero(), obj.state.orientation));
    obj.state.position.z() = Uniform(rng, ranges.clearance) - lowest;

    Vector3d v;
    do {
      v.x() = Uniform(rng, {-ranges.max_speed, ranges.max_speed});
      v.y() = Uniform(rng, {-ranges.max_speed, ranges.max_speed});
    } while (std::hypot(v.x(), v.y()) > ranges.max_speed);
    v.z() = Uniform(rng, ranges.velocity_z);
    obj.state.linear_velocity = v;
    for (int k = 0; k < 3; ++k) {
      obj.state.angular_velocity[k] = Uniform(rng, ranges.angular_velocity);
    }
    obj.physics.mass = Uniform(rng, ranges.mass);
    obj.physics.slide_friction = Uniform(rng, ranges.slide_friction);
    obj.physics.roll_friction = Uniform(rng, ranges.roll_friction);
    obj.physics.damping = Uniform(rng, ranges.damping);
    config.objects.push_back(obj);
  }
  config.camera.position = Vector3d(0.0, -2.0, Uniform(rng, ranges.camera_height));
  config.camera.pitch_deg = Uniform(rng, ranges.pitch);
  config.camera.fovy_deg = Uniform(rng, ranges.fovy);
  config.gravity.vector = Vector3d(0.0, 0.0, Uniform(rng, ranges.gravity_z));
  return Canonicalize(config);
}

FilterResult FilterScene(const SceneConfig& config, const Visibility& visibility) {
  if (!DetectInitialOverlap(config).empty()) return {false, "overlap"};
  int never_visible = 0;
  for (int m : visibility.max_count) never_visible += m == 0;
  if (never_visible > 1) return {false, "out_of_view"};
  for (int m : visibility.max_count) {
    if (m > 0 && m < kMinVisiblePixels) return {false, "too_small"};
  }
  return {true, ""};
}

SceneArtifacts BuildScene(const SceneConfig& config, const GenerateOptions& options) {
  SceneArtifacts out;
  out.config = config;
  if (!DetectInitialOverlap(config).empty()) {
    out.filter = {false, "overlap"};
    return out;
  }
  try {
    out.trace = Simulate(config, options.sim);
  } catch (const DivergenceError&) {
    out.filter = {false, "diverged"};
    return out;
  }
  out.render = RenderScene(out.trace, BuildCamera(config.camera, options.width, options.height));
  std::vector<IdMap> masks;
  for (const FrameArtifacts& f : out.render.frames) masks.push_back(f.id_map);
  out.visibility = VisibilitySeries(masks, static_cast<int>(config.objects.size()));
  out.filter = FilterScene(config, out.visibility);
  return out;
}

Manifest GenerateDataset(int n, const SamplingRanges& ranges, const std::string& out_dir,
                         uint64_t master_seed, const GenerateOptions& options) {
  if (n < 0) throw DomainError("scene count must be non-negative");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir + "'");
  }
  const fs::path root(out_dir);
  Manifest manifest;
  std::string lines;
  const long max_attempts = static_cast<long>(std::max(1, n)) * options.max_attempts_per_scene;

  for (long i = 0; manifest.accepted < n; ++i) {
    if (i >= max_attempts) {
      throw DomainError("gave up after " + std::to_string(i) + " attempts with " +
                        std::to_string(manifest.accepted) + " scenes accepted");
    }
    DatasetRecord record;
    record.index = static_cast<int>(i);
    record.seed = DeriveSeed(master_seed, i);
    const SceneConfig config = SampleConfig(ranges, record.seed);
    SceneArtifacts scene = BuildScene(config, options);
    record.accepted = scene.filter.accepted;
    record.reason = scene.filter.reason;

    if (record.accepted) {
      char id[32];
      std::snprintf(id, sizeof(id), "scene_%05d", manifest.accepted);
      record.id = id;
      const fs::path dir = root / id;
      fs::create_directories(dir / "masks");
      fs::create_directories(dir / "flow");
      const std::string config_text = SerializeConfig(config);
      record.config_path = record.id + "/config.yaml";
      WriteText(root / record.config_path, config_text);
      for (size_t k = 0; k < scene.render.frames.size(); ++k) {
        const std::string rel =
            record.id + "/masks/" + FrameName(scene.render.mask_frames[k], "pgm");
        WriteMask(scene.render.frames[k].id_map, (root / rel).string());
        record.mask_paths.push_back(rel);
      }
      for (size_t k = 0; k < scene.render.flows.size(); ++k) {
        const std::string rel =
            record.id + "/flow/" + FrameName(scene.render.flow_frames[k], "dflo");
        WriteFlow(scene.render.flows[k], (root / rel).string());
        record.flow_paths.push_back(rel);
      }
      const std::vector<MotionEvent> events = MineEvents(scene.trace, scene.visibility);
      const MotionDescription description =
          RenderDescription(events, config, scene.visibility, record.seed);
      record.events_path = record.id + "/events.ndrec";
      WriteText(root / record.events_path, SerializeEvents(events));
      record.description_path = record.id + "/description.txt";
      WriteText(root / record.description_path, description.text);
      record.target_path = record.id + "/target.txt";
      WriteText(root / record.target_path, FormatTarget(description.text, config_text));
      record.description = description.text;
      record.mask_hash = MaskHash(scene.render);
      ++manifest.accepted;
    } else {
      ++manifest.rejections[record.reason];
    }
    lines += RecordJson(record).dump() + "\n";
    if (options.on_record) options.on_record(record);
    manifest.records.push_back(std::move(record));
  }

  manifest.content_hash = Sha256Hex(lines);
  json tail;
  tail["accepted"] = manifest.accepted;
  tail["rejected"] = manifest.rejections;
  tail["content_hash"] = manifest.content_hash;
  WriteText(root / kManifestName, lines + tail.dump() + "\n");
  return manifest;
}

std::vector<std::string> ValidateDataset(const std::string& out_dir, bool rerender) {
  std::vector<std::string> problems;
  const fs::path root(out_dir);
  std::string text;
  try {
    text = ReadText(root / kManifestName);
  } catch (const IoError& e) {
    return {e.what()};
  }
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) return {"manifest is empty"};
  std::string body;
  for (size_t i = 0; i + 1 < lines.size(); ++i) body += lines[i] + "\n";
  try {
    const json tail = json::parse(lines.back());
    if (tail.at("content_hash").get<std::string>() != Sha256Hex(body)) {
      problems.push_back("manifest content hash does not match its records");
    }
  } catch (const json::exception& e) {
    problems.push_back(std::string("bad manifest trailer: ") + e.what());
  }

  for (size_t i = 0; i + 1 < lines.size(); ++i) {
    json rec;
    try {
      rec = json::parse(lines[i]);
    } catch (const json::exception& e) {
      problems.push_back("record " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (rec.value("status", "") != "accepted") continue;
    const std::string id = rec.value("id", "?");
    std::vector<std::string> paths = {rec.value("config", ""), rec.value("events", ""),
                                      rec.value("description", ""), rec.value("target", "")};
    for (const auto& p : rec["masks"]) paths.push_back(p.get<std::string>());
    for (const auto& p : rec["flow"]) paths.push_back(p.get<std::string>());
    bool missing = false;
    for (const std::string& p : paths) {
      if (p.empty() || !fs::exists(root / p)) {
        problems.push_back(id + ": missing file '" + p + "'");
        missing = true;
      }
    }
    if (missing) continue;
    SceneConfig config;
    try {
      config = ParseConfig(ReadText(root / rec["config"].get<std::string>()));
    } catch (const Error& e) {
      problems.push_back(id + ": config does not parse: " + e.what());
      continue;
    }
    std::string stored;
    for (const auto& p : rec["masks"]) stored += ReadText(root / p.get<std::string>());
    if (Sha256Hex(stored) != rec.value("mask_hash", "")) {
      problems.push_back(id + ": mask files differ from the recorded hash");
    }
    if (!rerender) continue;
    const SceneArtifacts scene = BuildScene(config);
    if (!scene.filter.accepted) {
      problems.push_back(id + ": re-rendered scene fails filter '" + scene.filter.reason + "'");
      continue;
    }
    if (MaskHash(scene.render) != rec.value("mask_hash", "")) {
      problems.push_back(id + ": re-rendered masks differ from the recorded hash");
    }
  }
  return problems;
}

}  // namespace dynscene

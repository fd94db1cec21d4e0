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

#include "dynscene/scene_config.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "dynscene/errors.h"

namespace dynscene {
namespace {

constexpr double kQuaternionTolerance = 1e-6;

std::string ObjectPath(size_t i) { return "objects[" + std::to_string(i) + "]"; }

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!is_alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return is_alpha(c) || (c >= '0' && c <= '9');
  });
}

// ---------------------------------------------------------------------------
// YAML reading helpers.

void CheckKeys(const YAML::Node& node, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw SchemaError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(where + ": unknown key '" + key + "'");
    }
  }
  for (std::string_view key : allowed) {
    if (!node[std::string(key)]) {
      throw SchemaError(where + ": missing key '" + std::string(key) + "'");
    }
  }
}

double ReadReal(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) throw SchemaError(where + ": expected a number");
  double value = 0.0;
  try {
    value = node.as<double>();
  } catch (const YAML::Exception&) {
    throw SchemaError(where + ": expected a number, got '" +
                      node.Scalar() + "'");
  }
  if (!std::isfinite(value)) throw DomainError(where + ": must be finite");
  return value;
}

std::vector<double> ReadReals(const YAML::Node& node, const std::string& where,
                              size_t arity) {
  if (!node.IsSequence()) {
    throw SchemaError(where + ": expected a list of " +
                      std::to_string(arity) + " numbers");
  }
  if (node.size() != arity) {
    throw SchemaError(where + ": expected " + std::to_string(arity) +
                      " entries, got " + std::to_string(node.size()));
  }
  std::vector<double> out;
  out.reserve(arity);
  for (size_t i = 0; i < arity; ++i) {
    out.push_back(ReadReal(node[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Eigen::Vector3d ReadVec3(const YAML::Node& node, const std::string& where) {
  const auto v = ReadReals(node, where, 3);
  return {v[0], v[1], v[2]};
}

ObjectSpec ReadObject(const YAML::Node& node, Shape shape, size_t index) {
  const std::string where = ObjectPath(index);
  switch (shape) {
    case Shape::kSphere:
      CheckKeys(node, where, {"type", "name", "radius", "state", "physics"});
      break;
    case Shape::kCylinder:
      CheckKeys(node, where,
                {"type", "name", "radius", "height", "state", "physics"});
      break;
    case Shape::kBox:
      CheckKeys(node, where, {"type", "name", "size", "state", "physics"});
      break;
  }
  ObjectSpec obj;
  obj.shape = shape;
  if (!node["name"].IsScalar()) throw SchemaError(where + ".name: expected a string");
  obj.name = node["name"].Scalar();
  if (shape != Shape::kBox) obj.radius = ReadReal(node["radius"], where + ".radius");
  if (shape == Shape::kCylinder) obj.height = ReadReal(node["height"], where + ".height");
  if (shape == Shape::kBox) obj.size = ReadVec3(node["size"], where + ".size");

  const YAML::Node state = node["state"];
  const std::string state_where = where + ".state";
  CheckKeys(state, state_where,
            {"angular_velocity", "linear_velocity", "orientation", "position"});
  obj.state.angular_velocity =
      ReadVec3(state["angular_velocity"], state_where + ".angular_velocity");
  obj.state.linear_velocity =
      ReadVec3(state["linear_velocity"], state_where + ".linear_velocity");
  obj.state.position = ReadVec3(state["position"], state_where + ".position");
  const auto q = ReadReals(state["orientation"], state_where + ".orientation", 4);
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  if (quat.norm() < 1e-9) {
    throw DomainError(state_where + ".orientation: zero quaternion");
  }
  quat.normalize();
  obj.state.orientation = quat;

  const YAML::Node physics = node["physics"];
  const std::string physics_where = where + ".physics";
  CheckKeys(physics, physics_where, {"friction", "mass", "damping"});
  const auto friction = ReadReals(physics["friction"], physics_where + ".friction", 2);
  obj.physics.slide_friction = friction[0];
  obj.physics.roll_friction = friction[1];
  obj.physics.mass = ReadReal(physics["mass"], physics_where + ".mass");
  obj.physics.damping = ReadReal(physics["damping"], physics_where + ".damping");
  return obj;
}

// ---------------------------------------------------------------------------
// Formatting.

std::string FormatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

template <typename Vec>
std::string FormatList(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += FormatReal(v[i]);
  }
  return s + "]";
}

bool Near(double a, double b, double abs_tol, double rel_tol) {
  return std::abs(a - b) <= abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
}

template <typename Vec>
bool NearVec(const Vec& a, const Vec& b, double abs_tol, double rel_tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!Near(a[i], b[i], abs_tol, rel_tol)) return false;
  }
  return true;
}

Eigen::Vector4d QuatWxyz(const Eigen::Quaterniond& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

std::vector<std::string> SplitPath(std::string_view path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= path.size()) {
    size_t dot = path.find('.', start);
    if (dot == std::string_view::npos) dot = path.size();
    parts.emplace_back(path.substr(start, dot - start));
    start = dot + 1;
  }
  return parts;
}

int ParseIndex(const std::string& s, int limit, std::string_view path) {
  int value = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0 ||
      value >= limit) {
    throw SchemaError("bad index '" + s + "' in key path '" +
                      std::string(path) + "'");
  }
  return value;
}

double& QuatComponent(Eigen::Quaterniond& q, int k) {
  switch (k) {
    case 0: return q.w();
    case 1: return q.x();
    case 2: return q.y();
    default: return q.z();
  }
}

double& FieldRef(SceneConfig& config, std::string_view path) {
  const auto parts = SplitPath(path);
  auto fail = [&]() -> double& {
    throw SchemaError("unknown key path '" + std::string(path) + "'");
  };
  if (parts.empty()) return fail();
  if (parts[0] == "camera") {
    if (parts.size() == 2 && parts[1] == "fovy") return config.camera.fovy_deg;
    if (parts.size() == 2 && parts[1] == "orientation") return config.camera.pitch_deg;
    if (parts.size() == 3 && parts[1] == "position") {
      return config.camera.position[ParseIndex(parts[2], 3, path)];
    }
    return fail();
  }
  if (parts[0] == "gravity") {
    if (parts.size() == 2) return config.gravity.vector[ParseIndex(parts[1], 3, path)];
    return fail();
  }
  if (parts[0] != "objects" || parts.size() < 3) return fail();
  ObjectSpec& obj = config.objects[ParseIndex(
      parts[1], static_cast<int>(config.objects.size()), path)];
  const std::string& field = parts[2];
  if (parts.size() == 3) {
    if (field == "radius" && obj.shape != Shape::kBox) return obj.radius;
    if (field == "height" && obj.shape == Shape::kCylinder) return obj.height;
    return fail();
  }
  if (field == "size" && obj.shape == Shape::kBox && parts.size() == 4) {
    return obj.size[ParseIndex(parts[3], 3, path)];
  }
  if (field == "state" && parts.size() == 5) {
    const std::string& sub = parts[3];
    if (sub == "orientation") {
      return QuatComponent(obj.state.orientation, ParseIndex(parts[4], 4, path));
    }
    const int k = ParseIndex(parts[4], 3, path);
    if (sub == "position") return obj.state.position[k];
    if (sub == "linear_velocity") return obj.state.linear_velocity[k];
    if (sub == "angular_velocity") return obj.state.angular_velocity[k];
    return fail();
  }
  if (field == "physics") {
    if (parts.size() == 4 && parts[3] == "mass") return obj.physics.mass;
    if (parts.size() == 4 && parts[3] == "damping") return obj.physics.damping;
    if (parts.size() == 5 && parts[3] == "friction") {
      return ParseIndex(parts[4], 2, path) == 0 ? obj.physics.slide_friction
                                                : obj.physics.roll_friction;
    }
  }
  return fail();
}

std::string Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view ShapeName(Shape shape) {
  switch (shape) {
    case Shape::kSphere: return "sphere";
    case Shape::kBox: return "box";
    case Shape::kCylinder: return "cylinder";
  }
  return "sphere";
}

std::optional<Shape> ShapeFromName(std::string_view name) {
  if (name == "sphere") return Shape::kSphere;
  if (name == "box") return Shape::kBox;
  if (name == "cylinder") return Shape::kCylinder;
  return std::nullopt;
}

const ObjectSpec* SceneConfig::Find(std::string_view name) const {
  const int i = IndexOf(name);
  return i < 0 ? nullptr : &objects[i];
}

int SceneConfig::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool operator==(const ObjectSpec& a, const ObjectSpec& b) {
  return a.shape == b.shape && a.name == b.name && a.radius == b.radius &&
         a.height == b.height && a.size == b.size &&
         a.state.position == b.state.position &&
         QuatWxyz(a.state.orientation) == QuatWxyz(b.state.orientation) &&
         a.state.linear_velocity == b.state.linear_velocity &&
         a.state.angular_velocity == b.state.angular_velocity &&
         a.physics.mass == b.physics.mass &&
         a.physics.slide_friction == b.physics.slide_friction &&
         a.physics.roll_friction == b.physics.roll_friction &&
         a.physics.damping == b.physics.damping;
}

bool operator==(const SceneConfig& a, const SceneConfig& b) {
  return a.objects == b.objects && a.camera.position == b.camera.position &&
         a.camera.pitch_deg == b.camera.pitch_deg &&
         a.camera.fovy_deg == b.camera.fovy_deg &&
         a.gravity.vector == b.gravity.vector;
}

bool ApproxEqual(const SceneConfig& a, const SceneConfig& b, double abs_tol,
                 double rel_tol) {
  if (a.objects.size() != b.objects.size()) return false;
  for (size_t i = 0; i < a.objects.size(); ++i) {
    const ObjectSpec& x = a.objects[i];
    const ObjectSpec& y = b.objects[i];
    if (x.shape != y.shape || x.name != y.name) return false;
    const bool ok =
        Near(x.radius, y.radius, abs_tol, rel_tol) &&
        Near(x.height, y.height, abs_tol, rel_tol) &&
        NearVec(x.size, y.size, abs_tol, rel_tol) &&
        NearVec(x.state.position, y.state.position, abs_tol, rel_tol) &&
        NearVec(QuatWxyz(x.state.orientation), QuatWxyz(y.state.orientation),
                abs_tol, rel_tol) &&
        NearVec(x.state.linear_velocity, y.state.linear_velocity, abs_tol, rel_tol) &&
        NearVec(x.state.angular_velocity, y.state.angular_velocity, abs_tol, rel_tol) &&
        Near(x.physics.mass, y.physics.mass, abs_tol, rel_tol) &&
        Near(x.physics.slide_friction, y.physics.slide_friction, abs_tol, rel_tol) &&
        Near(x.physics.roll_friction, y.physics.roll_friction, abs_tol, rel_tol) &&
        Near(x.physics.damping, y.physics.damping, abs_tol, rel_tol);
    if (!ok) return false;
  }
  return NearVec(a.camera.position, b.camera.position, abs_tol, rel_tol) &&
         Near(a.camera.pitch_deg, b.camera.pitch_deg, abs_tol, rel_tol) &&
         Near(a.camera.fovy_deg, b.camera.fovy_deg, abs_tol, rel_tol) &&
         NearVec(a.gravity.vector, b.gravity.vector, abs_tol, rel_tol);
}

std::vector<Violation> Validate(const SceneConfig& config,
                                const ValidationOptions& options) {
  std::vector<Violation> out;
  auto add = [&](std::string path, std::string rule) {
    out.push_back({std::move(path), std::move(rule)});
  };
  const auto finite3 = [](const Eigen::Vector3d& v) { return v.allFinite(); };

  const int n = static_cast<int>(config.objects.size());
  if (n < 1 || n > options.max_objects) {
    add("objects", "object count must be in [1, " +
                       std::to_string(options.max_objects) + "]");
  }
  std::set<std::string> names;
  for (size_t i = 0; i < config.objects.size(); ++i) {
    const ObjectSpec& obj = config.objects[i];
    const std::string p = ObjectPath(i);
    if (!IsIdentifier(obj.name)) add(p + ".name", "must be an identifier");
    if (!names.insert(obj.name).second) add(p + ".name", "must be unique");
    switch (obj.shape) {
      case Shape::kSphere:
        if (!(obj.radius > 0.0) || !std::isfinite(obj.radius)) add(p + ".radius", "must be > 0");
        break;
      case Shape::kCylinder:
        if (!(obj.radius > 0.0) || !std::isfinite(obj.radius)) add(p + ".radius", "must be > 0");
        if (!(obj.height > 0.0) || !std::isfinite(obj.height)) add(p + ".height", "must be > 0");
        break;
      case Shape::kBox:
        if (!(obj.size.minCoeff() > 0.0) || !finite3(obj.size)) add(p + ".size", "must be > 0");
        break;
    }
    const ObjectState& s = obj.state;
    if (!finite3(s.position)) add(p + ".state.position", "must be finite");
    if (!finite3(s.linear_velocity)) add(p + ".state.linear_velocity", "must be finite");
    if (!finite3(s.angular_velocity)) add(p + ".state.angular_velocity", "must be finite");
    const double qn = s.orientation.norm();
    if (!(std::abs(qn - 1.0) <= kQuaternionTolerance)) {
      add(p + ".state.orientation", "must be a unit quaternion");
    }
    const PhysicsSpec& ph = obj.physics;
    if (!(ph.mass > 0.0) || !std::isfinite(ph.mass)) add(p + ".physics.mass", "must be > 0");
    if (!(ph.slide_friction >= 0.0) || !(ph.roll_friction >= 0.0) ||
        !std::isfinite(ph.slide_friction) || !std::isfinite(ph.roll_friction)) {
      add(p + ".physics.friction", "components must be >= 0");
    }
    if (!std::isfinite(ph.damping)) add(p + ".physics.damping", "must be finite");
  }

  const CameraSpec& cam = config.camera;
  if (cam.position.x() != 0.0) add("camera.position", "x must be 0");
  if (cam.position.y() != -2.0) add("camera.position", "y must be -2");
  if (!(cam.position.z() > 0.0) || !std::isfinite(cam.position.z())) {
    add("camera.position", "height must be > 0");
  }
  if (!(cam.fovy_deg > 0.0 && cam.fovy_deg < 180.0)) add("camera.fovy", "must be in (0, 180)");
  if (!(cam.pitch_deg > -90.0 && cam.pitch_deg < 90.0)) {
    add("camera.orientation", "pitch must be in (-90, 90)");
  }

  const Eigen::Vector3d& g = config.gravity.vector;
  if (g.x() != 0.0 || g.y() != 0.0) add("gravity", "x and y must be 0");
  if (!(g.z() < 0.0) || !std::isfinite(g.z())) add("gravity", "z must be < 0");
  return out;
}

SceneConfig ParseConfig(std::string_view text, const ValidationOptions& options) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw SyntaxError(std::string("malformed document: ") + e.what());
  }
  if (!root.IsSequence()) {
    throw SchemaError("document must be a list of typed entries");
  }
  SceneConfig config;
  bool have_camera = false;
  bool have_gravity = false;
  try {
    for (size_t i = 0; i < root.size(); ++i) {
      const YAML::Node entry = root[i];
      if (!entry.IsMap() || !entry["type"] || !entry["type"].IsScalar()) {
        throw SchemaError("entry " + std::to_string(i) + ": missing 'type'");
      }
      const std::string type = entry["type"].Scalar();
      if (type == "camera") {
        if (have_camera) throw SchemaError("duplicate camera entry");
        CheckKeys(entry, "camera", {"type", "fovy", "orientation", "position"});
        config.camera.fovy_deg = ReadReal(entry["fovy"], "camera.fovy");
        config.camera.pitch_deg = ReadReal(entry["orientation"], "camera.orientation");
        config.camera.position = ReadVec3(entry["position"], "camera.position");
        have_camera = true;
      } else if (type == "gravity") {
        if (have_gravity) throw SchemaError("duplicate gravity entry");
        CheckKeys(entry, "gravity", {"type", "gravity"});
        config.gravity.vector = ReadVec3(entry["gravity"], "gravity.gravity");
        have_gravity = true;
      } else if (auto shape = ShapeFromName(type)) {
        config.objects.push_back(ReadObject(entry, *shape, config.objects.size()));
      } else {
        throw SchemaError("entry " + std::to_string(i) + ": unknown type '" +
                          type + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("unexpected structure: ") + e.what());
  }
  if (!have_camera) throw SchemaError("missing camera entry");
  if (!have_gravity) throw SchemaError("missing gravity entry");

  const auto violations = Validate(config, options);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) {
      if (!msg.empty()) msg += "; ";
      msg += v.path + ": " + v.rule;
    }
    throw DomainError(msg);
  }
  return config;
}

std::string SerializeConfig(const SceneConfig& config) {
  std::ostringstream os;
  for (const ObjectSpec& obj : config.objects) {
    os << "- type: " << ShapeName(obj.shape) << "\n";
    os << "  name: " << obj.name << "\n";
    switch (obj.shape) {
      case Shape::kSphere:
        os << "  radius: " << FormatReal(obj.radius) << "\n";
        break;
      case Shape::kCylinder:
        os << "  radius: " << FormatReal(obj.radius) << "\n";
        os << "  height: " << FormatReal(obj.height) << "\n";
        break;
      case Shape::kBox:
        os << "  size: " << FormatList(obj.size) << "\n";
        break;
    }
    Eigen::Quaterniond q = obj.state.orientation;
    if (q.norm() > 0.0) q.normalize();
    os << "  state:\n";
    os << "    angular_velocity: " << FormatList(obj.state.angular_velocity) << "\n";
    os << "    linear_velocity: " << FormatList(obj.state.linear_velocity) << "\n";
    os << "    orientation: " << FormatList(QuatWxyz(q)) << "\n";
    os << "    position: " << FormatList(obj.state.position) << "\n";
    os << "  physics:\n";
    os << "    friction: " << FormatList(Eigen::Vector2d(obj.physics.slide_friction,
                                                         obj.physics.roll_friction))
       << "\n";
    os << "    mass: " << FormatReal(obj.physics.mass) << "\n";
    os << "    damping: " << FormatReal(obj.physics.damping) << "\n";
  }
  os << "- type: camera\n";
  os << "  fovy: " << FormatReal(config.camera.fovy_deg) << "\n";
  os << "  orientation: " << FormatReal(config.camera.pitch_deg) << "\n";
  os << "  position: " << FormatList(config.camera.position) << "\n";
  os << "- type: gravity\n";
  os << "  gravity: " << FormatList(config.gravity.vector) << "\n";
  return os.str();
}

SceneConfig Canonicalize(const SceneConfig& config) {
  const ValidationOptions options{std::max<int>(6, config.objects.size())};
  SceneConfig current = config;
  std::string text = SerializeConfig(current);
  for (int i = 0; i < 16; ++i) {
    SceneConfig next = ParseConfig(text, options);
    std::string next_text = SerializeConfig(next);
    if (next_text == text) return next;
    current = std::move(next);
    text = std::move(next_text);
  }
  return ParseConfig(text, options);
}

AnswerParts ExtractAnswer(std::string_view text) {
  enum class Tag { kThinkOpen, kThinkClose, kAnswerOpen, kAnswerClose };
  static constexpr std::pair<std::string_view, Tag> kTags[] = {
      {"<think>", Tag::kThinkOpen},
      {"</think>", Tag::kThinkClose},
      {"<answer>", Tag::kAnswerOpen},
      {"</answer>", Tag::kAnswerClose},
  };

  std::optional<std::string> last_think;
  std::optional<Tag> open;
  size_t open_end = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t lt = text.find('<', pos);
    if (lt == std::string_view::npos) break;
    std::optional<Tag> tag;
    size_t tag_len = 0;
    for (const auto& [literal, kind] : kTags) {
      if (text.substr(lt, literal.size()) == literal) {
        tag = kind;
        tag_len = literal.size();
        break;
      }
    }
    if (!tag) {
      pos = lt + 1;
      continue;
    }
    switch (*tag) {
      case Tag::kThinkOpen:
      case Tag::kAnswerOpen:
        if (open) throw TagError("nested or interleaved tags at offset " + std::to_string(lt));
        open = tag;
        open_end = lt + tag_len;
        break;
      case Tag::kThinkClose:
        if (open != Tag::kThinkOpen) throw TagError("unbalanced </think> at offset " + std::to_string(lt));
        last_think = Trim(text.substr(open_end, lt - open_end));
        open.reset();
        break;
      case Tag::kAnswerClose:
        if (open != Tag::kAnswerOpen) throw TagError("unbalanced </answer> at offset " + std::to_string(lt));
        return {last_think, Trim(text.substr(open_end, lt - open_end))};
    }
    pos = lt + tag_len;
  }
  if (open) throw TagError("unterminated tag");
  throw TagError("no <answer>...</answer> block");
}

std::string FormatTarget(const std::optional<std::string>& reasoning,
                         std::string_view config_text) {
  std::string out;
  if (reasoning && !reasoning->empty()) {
    out += "<think>\n" + *reasoning + "\n</think>\n\n";
  }
  out += "<answer>\n";
  out += config_text;
  if (!config_text.empty() && config_text.back() != '\n') out += "\n";
  out += "</answer>\n";
  return out;
}

std::string_view DiscretizeX(double x) {
  if (x < -2.0) return "far left";
  if (x < -1.0) return "moderately left";
  if (x < -0.5) return "slightly left";
  if (x < 0.5) return "near center";
  if (x < 1.0) return "slightly right";
  if (x < 2.0) return "moderately right";
  return "far right";
}

std::string_view DiscretizeY(double y) {
  if (y < -2.0) return "far foreground";
  if (y < -1.0) return "moderately foreground";
  if (y < -0.5) return "slightly foreground";
  if (y < 0.5) return "mid-depth";
  if (y < 1.0) return "slightly background";
  if (y < 2.0) return "moderately background";
  return "far background";
}

std::string_view DiscretizeZ(double z) {
  if (z < 0.6) return "on the ground";
  if (z < 1.5) return "low";
  return "high";
}

double GetField(const SceneConfig& config, std::string_view path) {
  return FieldRef(const_cast<SceneConfig&>(config), path);
}

void SetField(SceneConfig& config, std::string_view path, double value) {
  FieldRef(config, path) = value;
}

SceneConfig ApplyEdits(const SceneConfig& config,
                       const std::vector<std::string>& assignments) {
  SceneConfig out = config;
  for (const std::string& a : assignments) {
    const size_t eq = a.find('=');
    if (eq == std::string::npos) {
      throw SchemaError("assignment '" + a + "' must look like key.path=value");
    }
    const std::string key = Trim(std::string_view(a).substr(0, eq));
    const std::string rhs = Trim(std::string_view(a).substr(eq + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), value);
    if (ec != std::errc() || ptr != rhs.data() + rhs.size()) {
      throw SchemaError("assignment '" + a + "': value is not a number");
    }
    SetField(out, key, value);
  }
  for (ObjectSpec& obj : out.objects) {
    if (obj.state.orientation.norm() < 1e-9) {
      throw DomainError(obj.name + ": zero quaternion after edit");
    }
    obj.state.orientation.normalize();
  }
  const auto violations = Validate(out);
  if (!violations.empty()) {
    throw DomainError(violations.front().path + ": " + violations.front().rule);
  }
  return out;
}

}  // namespace dynscene

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

#include "dynscene/event_mining.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include <yaml-cpp/yaml.h>

#include "dynscene/collision.h"
#include "dynscene/embedded_data.h"
#include "dynscene/errors.h"

namespace dynscene {
namespace {

constexpr int kObservationSamples = 10;

const std::vector<std::string>& RequiredSlots() {
  static const std::vector<std::string> slots = {
      "intro",          "shape_sphere",     "shape_box",        "shape_cylinder",
      "position",       "moving",           "resting",          "visibility_enter",
      "visibility_leave", "stop",           "ground_contact",   "observation_visible",
      "pair_collision", "no_contacts"};
  return slots;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t HashString(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string Short(double v) { return Fmt("%.3g", v); }
std::string Seconds(double t) { return Fmt("%.1f", t); }

using Vars = std::map<std::string, std::string>;

std::string Fill(const std::string& pattern, const Vars& vars) {
  std::string out;
  size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const size_t close = pattern.find('}', i);
      if (close != std::string::npos) {
        auto it = vars.find(pattern.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

class Describer {
 public:
  Describer(const TemplateSet& templates, uint64_t seed)
      : templates_(templates), seed_(seed) {}

  std::string Say(const std::string& slot, const Vars& vars) {
    const std::vector<std::string>& variants = templates_.at(slot);
    const uint64_t n = variants.size();
    const uint64_t occurrence = occurrences_[slot]++;
    const uint64_t mix = SplitMix64(HashString(slot) ^ (occurrence * 0x100000001B3ULL));
    return Fill(variants[(seed_ % n + mix % n) % n], vars);
  }

 private:
  const TemplateSet& templates_;
  uint64_t seed_;
  std::map<std::string, uint64_t> occurrences_;
};

int EventOrder(EventKind kind) { return static_cast<int>(kind); }

}  // namespace

const char* EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kVisibilityEnter: return "visibility_enter";
    case EventKind::kVisibilityLeave: return "visibility_leave";
    case EventKind::kStop: return "stop";
    case EventKind::kGroundContact: return "ground_contact";
    case EventKind::kPairCollision: return "pair_collision";
  }
  return "unknown";
}

EventKind EventKindFromName(const std::string& name) {
  for (EventKind k : {EventKind::kVisibilityEnter, EventKind::kVisibilityLeave,
                      EventKind::kStop, EventKind::kGroundContact,
                      EventKind::kPairCollision}) {
    if (name == EventKindName(k)) return k;
  }
  throw SchemaError("unknown event kind '" + name + "'");
}

std::optional<int> StopFrame(const std::vector<double>& speeds, double epsilon) {
  int k = static_cast<int>(speeds.size());
  while (k > 0 && speeds[k - 1] < epsilon) --k;
  if (k == static_cast<int>(speeds.size()) || k == 0) return std::nullopt;
  return k;
}

std::vector<MotionEvent> MineEvents(const SimTrace& trace, const Visibility& visibility,
                                    const MiningOptions& options) {
  const SceneConfig& config = trace.config;
  const int frames = static_cast<int>(trace.frames.size());
  const double fps = trace.fps;
  std::vector<MotionEvent> events;

  auto speed_at = [&](int object, int frame) {
    const BodyState& b = trace.frames[frame].bodies[object];
    const double r = ConvexShape::FromSpec(config.objects[object]).BoundingRadius();
    return b.linear_velocity.norm() + r * b.angular_velocity.norm();
  };
  auto make = [&](EventKind kind, int frame, std::vector<std::string> who, int object) {
    MotionEvent e;
    e.kind = kind;
    e.frame = frame;
    e.time = frame / fps;
    e.participants = std::move(who);
    e.payload = trace.frames[frame].bodies[object].linear_velocity.norm();
    events.push_back(std::move(e));
  };

  for (size_t o = 0; o < config.objects.size(); ++o) {
    const std::string& name = config.objects[o].name;
    const int obj = static_cast<int>(o);
    if (o < visibility.counts.size()) {
      const std::vector<int>& counts = visibility.counts[o];
      const int n = std::min<int>(frames, counts.size());
      bool entered = false, left = false;
      for (int k = 1; k < n; ++k) {
        const bool before = counts[k - 1] >= options.visibility_threshold;
        const bool now = counts[k] >= options.visibility_threshold;
        if (!before && now && !entered) {
          make(EventKind::kVisibilityEnter, k, {name}, obj);
          entered = true;
        } else if (before && !now && !left) {
          make(EventKind::kVisibilityLeave, k, {name}, obj);
          left = true;
        }
      }
    }
    std::vector<double> speeds(frames);
    for (int k = 0; k < frames; ++k) speeds[k] = speed_at(obj, k);
    if (auto stop = StopFrame(speeds, options.stop_epsilon)) {
      make(EventKind::kStop, *stop, {name}, obj);
    }
  }

  for (const ContactEvent& c : trace.contacts) {
    if (c.time <= 0.0) continue;
    const int frame = std::clamp(static_cast<int>(std::lround(c.time * fps)), 0, frames - 1);
    const int first = config.IndexOf(c.participants.front());
    if (c.kind == ContactKind::kObjectGround) {
      make(EventKind::kGroundContact, frame, c.participants, first);
    } else {
      make(EventKind::kPairCollision, frame, c.participants, first);
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const MotionEvent& a, const MotionEvent& b) {
                     if (a.frame != b.frame) return a.frame < b.frame;
                     if (a.kind != b.kind) return EventOrder(a.kind) < EventOrder(b.kind);
                     return a.participants < b.participants;
                   });
  return events;
}

TemplateSet ParseTemplates(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SyntaxError(std::string("template file: ") + e.what());
  }
  if (!root.IsMap()) throw SchemaError("template file must be a mapping");
  TemplateSet set;
  for (const auto& entry : root) {
    const std::string slot = entry.first.as<std::string>();
    if (!entry.second.IsSequence()) throw SchemaError("slot '" + slot + "' must be a list");
    for (const auto& v : entry.second) set[slot].push_back(v.as<std::string>());
  }
  for (const std::string& slot : RequiredSlots()) {
    auto it = set.find(slot);
    if (it == set.end()) throw SchemaError("missing template slot '" + slot + "'");
    if (it->second.size() < 3) {
      throw SchemaError("slot '" + slot + "' needs at least three variants");
    }
  }
  return set;
}

const TemplateSet& DefaultTemplates() {
  static const TemplateSet set =
      ParseTemplates(std::string(embedded::DescriptionTemplates()));
  return set;
}

std::vector<int> ObservationFrames(int frame_count) {
  std::vector<int> frames = FlowSampleFrames(frame_count, 3);
  if (frames.size() > kObservationSamples) frames.resize(kObservationSamples);
  return frames;
}

MotionDescription RenderDescription(const std::vector<MotionEvent>& events,
                                    const SceneConfig& config,
                                    const Visibility& visibility, uint64_t seed,
                                    const TemplateSet& templates,
                                    const MiningOptions& options) {
  for (const MotionEvent& e : events) {
    for (const std::string& name : e.participants) {
      if (!config.Find(name)) {
        throw MismatchError("event " + std::string(EventKindName(e.kind)) +
                            " names unknown object '" + name + "'");
      }
    }
  }
  Describer say(templates, seed);
  std::ostringstream text;
  text << say.Say("intro", {}) << "\n";

  for (const ObjectSpec& obj : config.objects) {
    Vars v{{"radius", Short(obj.radius)},
           {"height", Short(obj.height)},
           {"sx", Short(obj.size.x())},
           {"sy", Short(obj.size.y())},
           {"sz", Short(obj.size.z())},
           {"mass", Short(obj.physics.mass)}};
    const Eigen::Vector3d& p = obj.state.position;
    v["xbin"] = DiscretizeX(p.x());
    v["ybin"] = DiscretizeY(p.y());
    v["zbin"] = DiscretizeZ(p.z());
    const double speed = obj.state.linear_velocity.norm();
    v["speed"] = Fmt("%.2f", speed);

    text << "\n- " << obj.name << ": "
         << say.Say("shape_" + std::string(ShapeName(obj.shape)), v) << ", "
         << say.Say("position", v) << " "
         << say.Say(Fmt("%.2f", speed) == "0.00" ? "resting" : "moving", v);
    for (const MotionEvent& e : events) {
      if (e.kind == EventKind::kPairCollision || e.participants.front() != obj.name) continue;
      text << " " << say.Say(EventKindName(e.kind), {{"t", Seconds(e.time)}});
    }
    text << "\n";
  }

  const std::vector<int> sample = ObservationFrames(
      visibility.counts.empty() ? 0 : static_cast<int>(visibility.counts.front().size()));
  std::vector<std::string> visible_names;
  std::string per_object;
  for (size_t o = 0; o < config.objects.size(); ++o) {
    int n = 0;
    if (o < visibility.counts.size()) {
      for (int k : sample) n += visibility.counts[o][k] >= options.visibility_threshold;
    }
    if (n > 0) visible_names.push_back(config.objects[o].name);
    per_object += " " + say.Say("observation_visible", {{"name", config.objects[o].name},
                                                          {"n", std::to_string(n)}});
  }
  std::string list;
  for (size_t i = 0; i < visible_names.size(); ++i) {
    list += (i ? ", " : "") + visible_names[i];
  }
  text << "\n- Observation Data: Visible entities: " << (list.empty() ? "none" : list)
       << "." << per_object << "\n";

  text << "\n- Dynamic Interactions:";
  bool any = false;
  for (const MotionEvent& e : events) {
    if (e.kind != EventKind::kPairCollision) continue;
    any = true;
    text << " "
         << say.Say("pair_collision", {{"a", e.participants[0]},
                                       {"b", e.participants[1]},
                                       {"t", Seconds(e.time)}});
  }
  if (!any) text << " " << say.Say("no_contacts", {});
  text << "\n";

  return {text.str(), events, seed};
}

std::string SerializeEvents(const std::vector<MotionEvent>& events) {
  std::string out;
  for (const MotionEvent& e : events) {
    nlohmann::ordered_json j;
    j["kind"] = EventKindName(e.kind);
    j["frame"] = e.frame;
    j["time"] = e.time;
    j["participants"] = e.participants;
    j["payload"] = e.payload;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<MotionEvent> ParseEvents(const std::string& text) {
  std::vector<MotionEvent> events;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      MotionEvent e;
      e.kind = EventKindFromName(j.at("kind").get<std::string>());
      e.frame = j.at("frame").get<int>();
      e.time = j.at("time").get<double>();
      e.participants = j.at("participants").get<std::vector<std::string>>();
      e.payload = j.at("payload").get<double>();
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw SyntaxError(std::string("event record: ") + ex.what());
    }
  }
  return events;
}

}  // namespace dynscene

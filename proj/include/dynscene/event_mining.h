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

#ifndef DYNSCENE_EVENT_MINING_H_
#define DYNSCENE_EVENT_MINING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynscene/renderer.h"
#include "dynscene/simulator.h"

namespace dynscene {

enum class EventKind {
  kVisibilityEnter,
  kVisibilityLeave,
  kStop,
  kGroundContact,
  kPairCollision,
};

const char* EventKindName(EventKind kind);
EventKind EventKindFromName(const std::string& name);

struct MotionEvent {
  EventKind kind = EventKind::kStop;
  int frame = 0;
  double time = 0.0;  // frame / fps
  std::vector<std::string> participants;
  double payload = 0.0;  // speed of the first participant at the event (m/s)

  bool operator==(const MotionEvent&) const = default;
};

struct MiningOptions {
  int visibility_threshold = 50;  // pixels
  double stop_epsilon = 0.05;     // m/s, on |v| + r_eff |w|
};

// Extracts visibility, stop and contact events. `visibility.counts` must
// hold one entry per trace frame. Contacts already present at t = 0 are part
// of the initial state and produce no event.
std::vector<MotionEvent> MineEvents(const SimTrace& trace, const Visibility& visibility,
                                    const MiningOptions& options = {});

// First frame k > 0 with speeds[k-1] >= epsilon and speeds[j] < epsilon for
// every j >= k.
std::optional<int> StopFrame(const std::vector<double>& speeds, double epsilon);

// Slot name -> paraphrases.
using TemplateSet = std::map<std::string, std::vector<std::string>>;

// Parses a template file; throws SchemaError when a required slot is
// missing or has fewer than three variants.
TemplateSet ParseTemplates(const std::string& yaml_text);
const TemplateSet& DefaultTemplates();

struct MotionDescription {
  std::string text;
  std::vector<MotionEvent> events;
  uint64_t template_seed = 0;
};

// Frames at which "visible in n/10 frames" is counted.
std::vector<int> ObservationFrames(int frame_count);

// Renders the reasoning text. Visibility is counted on ObservationFrames
// with the mining threshold. Throws MismatchError when an event names an
// object that is not in the config.
MotionDescription RenderDescription(const std::vector<MotionEvent>& events,
                                    const SceneConfig& config,
                                    const Visibility& visibility, uint64_t seed,
                                    const TemplateSet& templates = DefaultTemplates(),
                                    const MiningOptions& options = {});

// Line-delimited JSON records: kind, frame, time, participants, payload.
std::string SerializeEvents(const std::vector<MotionEvent>& events);
std::vector<MotionEvent> ParseEvents(const std::string& text);

}  // namespace dynscene

#endif  // DYNSCENE_EVENT_MINING_H_

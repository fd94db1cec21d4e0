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

#ifndef DYNSCENE_METRICS_H_
#define DYNSCENE_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynscene/renderer.h"
#include "dynscene/scene_config.h"
#include "dynscene/simulator.h"

namespace dynscene {

// Foreground IoU of one frame pair. Both foregrounds empty counts as 1.
double FrameIoU(const IdMap& pred, const IdMap& ref);

// Mean FrameIoU over `frames` (indices into both lists). Throws ShapeError
// on mismatched sizes.
double MaskIoU(const std::vector<IdMap>& pred, const std::vector<IdMap>& ref,
               const std::vector<int>& frames);

// Mean end-point error of one field pair over all pixels.
double FrameEpe(const FlowField& pred, const FlowField& ref);
double FlowEpe(const std::vector<FlowField>& pred, const std::vector<FlowField>& ref,
               const std::vector<int>& frames);

// Equal multisets of shape kinds.
bool CompositionAccuracy(const SceneConfig& pred, const SceneConfig& ref);

struct ParamMae {
  double damping = 0.0;
  double roll_friction = 0.0;
  double slide_friction = 0.0;
  double position = 0.0;
  double velocity = 0.0;
};

// Objects are paired per shape kind after sorting both sides by initial x,
// then y. Throws CompositionError when the compositions differ.
ParamMae ComputeParamMae(const SceneConfig& pred, const SceneConfig& ref);

// Index pairs (pred, ref) used by ComputeParamMae, in ref order.
std::vector<std::pair<int, int>> MatchObjects(const SceneConfig& pred,
                                              const SceneConfig& ref);

// Reference renders keyed by frame index.
struct ReferenceArtifacts {
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  std::map<int, IdMap> masks;
  std::map<int, FlowField> flows;  // keyed by source frame

  static ReferenceArtifacts FromRender(const SceneRender& render);
  // Reads masks/NNN.pgm and flow/NNN.dflo under `dir`.
  static ReferenceArtifacts Load(const std::string& dir);

  // Frames used for "full sequence" scores: the flow source frames.
  std::vector<int> SequenceFrames() const;
};

struct EvalOptions {
  SimOptions sim;
  // Divide EPE by the image diagonal.
  bool normalize_epe = false;
};

struct EvalReport {
  double iou_first_frame = 0.0;
  double iou_full_sequence = 0.0;
  double epe_first_frame = 0.0;
  double epe_full_sequence = 0.0;
  // Absent when no reference config was supplied.
  std::optional<bool> composition_correct;
  std::optional<ParamMae> param_mae;
  // Per reference object IoU over the sequence frames, when compositions match.
  std::vector<double> per_object_iou;
  bool failed = false;
  std::string failure;

  // Single-line "key=value" record.
  std::string ToRecord() const;
};

// Scores used when a candidate cannot be parsed or simulated: IoU 0, EPE
// equal to the mean reference flow magnitude, composition false.
EvalReport WorstCaseReport(const ReferenceArtifacts& ref, const std::string& reason,
                           const EvalOptions& options = {});

// Simulates and renders `pred` at the reference resolution and scores it.
// Never throws for candidate problems; those yield a worst-case report.
EvalReport Evaluate(const SceneConfig& pred, const ReferenceArtifacts& ref,
                    const SceneConfig* ref_config = nullptr,
                    const EvalOptions& options = {});

// Same for raw candidate text: either a bare config document or model output
// containing an <answer> block.
EvalReport EvaluateText(const std::string& text, const ReferenceArtifacts& ref,
                        const SceneConfig* ref_config = nullptr,
                        const EvalOptions& options = {});

// Parses candidate text the way EvaluateText does.
SceneConfig ParseCandidate(const std::string& text);

}  // namespace dynscene

#endif  // DYNSCENE_METRICS_H_

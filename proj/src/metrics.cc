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

#include "dynscene/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dynscene/camera.h"
#include "dynscene/errors.h"
#include "dynscene/image_io.h"

namespace dynscene {
namespace {

namespace fs = std::filesystem;

void CheckSameSize(int w1, int h1, size_t n1, int w2, int h2, size_t n2) {
  if (w1 != w2 || h1 != h2 || n1 != n2) {
    throw ShapeError("size mismatch: " + std::to_string(w1) + "x" + std::to_string(h1) +
                     " vs " + std::to_string(w2) + "x" + std::to_string(h2));
  }
}

double Ratio(long inter, long uni) {
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double MeanFlowMagnitude(const FlowField& f) {
  const size_t n = static_cast<size_t>(f.width) * f.height;
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = f.data[2 * i], dy = f.data[2 * i + 1];
    sum += std::sqrt(dx * dx + dy * dy);
  }
  return sum / n;
}

// Per-kind object indices sorted by initial (x, y).
std::map<Shape, std::vector<int>> SortedByKind(const SceneConfig& c) {
  std::map<Shape, std::vector<int>> out;
  for (size_t i = 0; i < c.objects.size(); ++i) out[c.objects[i].shape].push_back(i);
  for (auto& [kind, idx] : out) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      const auto& pa = c.objects[a].state.position;
      const auto& pb = c.objects[b].state.position;
      if (pa.x() != pb.x()) return pa.x() < pb.x();
      return pa.y() < pb.y();
    });
  }
  return out;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double FrameIoU(const IdMap& pred, const IdMap& ref) {
  CheckSameSize(pred.width, pred.height, pred.ids.size(), ref.width, ref.height,
                ref.ids.size());
  long inter = 0, uni = 0;
  for (size_t i = 0; i < pred.ids.size(); ++i) {
    const bool a = pred.ids[i] != 0, b = ref.ids[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  return Ratio(inter, uni);
}

double MaskIoU(const std::vector<IdMap>& pred, const std::vector<IdMap>& ref,
               const std::vector<int>& frames) {
  if (frames.empty()) throw ShapeError("empty frame set");
  double sum = 0.0;
  for (int k : frames) {
    if (k < 0 || k >= static_cast<int>(pred.size()) || k >= static_cast<int>(ref.size())) {
      throw ShapeError("frame " + std::to_string(k) + " out of range");
    }
    sum += FrameIoU(pred[k], ref[k]);
  }
  return sum / frames.size();
}

double FrameEpe(const FlowField& pred, const FlowField& ref) {
  CheckSameSize(pred.width, pred.height, pred.data.size(), ref.width, ref.height,
                ref.data.size());
  const size_t n = pred.data.size() / 2;
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(pred.data[2 * i]) - ref.data[2 * i];
    const double dy = static_cast<double>(pred.data[2 * i + 1]) - ref.data[2 * i + 1];
    if (dx != 0.0 || dy != 0.0) sum += std::sqrt(dx * dx + dy * dy);
  }
  return sum / n;
}

double FlowEpe(const std::vector<FlowField>& pred, const std::vector<FlowField>& ref,
               const std::vector<int>& frames) {
  if (frames.empty()) throw ShapeError("empty frame set");
  double sum = 0.0;
  for (int k : frames) {
    if (k < 0 || k >= static_cast<int>(pred.size()) || k >= static_cast<int>(ref.size())) {
      throw ShapeError("flow index " + std::to_string(k) + " out of range");
    }
    sum += FrameEpe(pred[k], ref[k]);
  }
  return sum / frames.size();
}

bool CompositionAccuracy(const SceneConfig& pred, const SceneConfig& ref) {
  auto kinds = [](const SceneConfig& c) {
    std::vector<Shape> out;
    for (const ObjectSpec& o : c.objects) out.push_back(o.shape);
    std::sort(out.begin(), out.end());
    return out;
  };
  return kinds(pred) == kinds(ref);
}

std::vector<std::pair<int, int>> MatchObjects(const SceneConfig& pred,
                                              const SceneConfig& ref) {
  if (!CompositionAccuracy(pred, ref)) {
    throw CompositionError("object compositions differ");
  }
  const auto p = SortedByKind(pred);
  const auto r = SortedByKind(ref);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [kind, ref_idx] : r) {
    const std::vector<int>& pred_idx = p.at(kind);
    for (size_t i = 0; i < ref_idx.size(); ++i) pairs.emplace_back(pred_idx[i], ref_idx[i]);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return pairs;
}

ParamMae ComputeParamMae(const SceneConfig& pred, const SceneConfig& ref) {
  const auto pairs = MatchObjects(pred, ref);
  ParamMae mae;
  if (pairs.empty()) return mae;
  for (const auto& [pi, ri] : pairs) {
    const ObjectSpec& a = pred.objects[pi];
    const ObjectSpec& b = ref.objects[ri];
    mae.damping += std::abs(a.physics.damping - b.physics.damping);
    mae.roll_friction += std::abs(a.physics.roll_friction - b.physics.roll_friction);
    mae.slide_friction += std::abs(a.physics.slide_friction - b.physics.slide_friction);
    mae.position += (a.state.position - b.state.position).cwiseAbs().mean();
    mae.velocity += (a.state.linear_velocity - b.state.linear_velocity).cwiseAbs().mean();
  }
  const double n = pairs.size();
  mae.damping /= n;
  mae.roll_friction /= n;
  mae.slide_friction /= n;
  mae.position /= n;
  mae.velocity /= n;
  return mae;
}

ReferenceArtifacts ReferenceArtifacts::FromRender(const SceneRender& render) {
  ReferenceArtifacts ref;
  for (size_t i = 0; i < render.mask_frames.size(); ++i) {
    ref.masks[render.mask_frames[i]] = render.frames[i].id_map;
  }
  for (size_t i = 0; i < render.flow_frames.size(); ++i) {
    ref.flows[render.flow_frames[i]] = render.flows[i];
  }
  if (!render.frames.empty()) {
    ref.width = render.frames.front().id_map.width;
    ref.height = render.frames.front().id_map.height;
  }
  return ref;
}

ReferenceArtifacts ReferenceArtifacts::Load(const std::string& dir) {
  ReferenceArtifacts ref;
  auto scan = [&](const std::string& sub, const std::string& ext, auto&& load) {
    const fs::path path = fs::path(dir) / sub;
    if (!fs::is_directory(path)) throw IoError("missing directory '" + path.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ext) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      const std::string stem = f.stem().string();
      if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
      load(std::stoi(stem), f.string());
    }
  };
  scan("masks", ".pgm", [&](int k, const std::string& f) { ref.masks[k] = ReadMask(f); });
  scan("flow", ".dflo", [&](int k, const std::string& f) { ref.flows[k] = ReadFlow(f); });
  if (ref.masks.empty() || ref.flows.empty()) {
    throw IoError("'" + dir + "' holds no masks or no flow fields");
  }
  ref.width = ref.masks.begin()->second.width;
  ref.height = ref.masks.begin()->second.height;
  return ref;
}

std::vector<int> ReferenceArtifacts::SequenceFrames() const {
  std::vector<int> out;
  for (const auto& [k, f] : flows) out.push_back(k);
  return out;
}

std::string EvalReport::ToRecord() const {
  std::string out = "status=" + std::string(failed ? "failed" : "ok");
  out += " iou_first_frame=" + Num(iou_first_frame);
  out += " iou_full_sequence=" + Num(iou_full_sequence);
  out += " epe_first_frame=" + Num(epe_first_frame);
  out += " epe_full_sequence=" + Num(epe_full_sequence);
  out += " composition_correct=" +
         std::string(!composition_correct ? "na" : *composition_correct ? "true" : "false");
  if (param_mae) {
    out += " mae_damping=" + Num(param_mae->damping);
    out += " mae_roll_friction=" + Num(param_mae->roll_friction);
    out += " mae_slide_friction=" + Num(param_mae->slide_friction);
    out += " mae_position=" + Num(param_mae->position);
    out += " mae_velocity=" + Num(param_mae->velocity);
  }
  for (size_t i = 0; i < per_object_iou.size(); ++i) {
    out += " object_iou_" + std::to_string(i) + "=" + Num(per_object_iou[i]);
  }
  if (failed) {
    std::string reason = failure;
    std::replace(reason.begin(), reason.end(), ' ', '_');
    std::replace(reason.begin(), reason.end(), '\n', '_');
    out += " reason=" + reason;
  }
  return out;
}

EvalReport WorstCaseReport(const ReferenceArtifacts& ref, const std::string& reason,
                           const EvalOptions& options) {
  EvalReport report;
  report.failed = true;
  report.failure = reason;
  const std::vector<int> frames = ref.SequenceFrames();
  const double scale =
      options.normalize_epe ? 1.0 / std::hypot(ref.width, ref.height) : 1.0;
  if (!frames.empty()) {
    report.epe_first_frame = MeanFlowMagnitude(ref.flows.at(frames.front())) * scale;
    double sum = 0.0;
    for (int k : frames) sum += MeanFlowMagnitude(ref.flows.at(k));
    report.epe_full_sequence = sum / frames.size() * scale;
  }
  report.composition_correct = false;
  return report;
}

EvalReport Evaluate(const SceneConfig& pred, const ReferenceArtifacts& ref,
                    const SceneConfig* ref_config, const EvalOptions& options) {
  const std::vector<int> frames = ref.SequenceFrames();
  if (frames.empty() || ref.masks.empty()) {
    return WorstCaseReport(ref, "reference has no frames", options);
  }
  SimTrace trace;
  SceneRender render;
  try {
    SimOptions sim = options.sim;
    const int needed = std::max(ref.masks.rbegin()->first, frames.back() + 1);
    sim.duration = std::max(sim.duration, static_cast<double>(needed) / sim.fps);
    trace = Simulate(pred, sim);
    render = RenderScene(trace, BuildCamera(pred.camera, ref.width, ref.height),
                         {false, frames.size() > 1 ? frames[1] - frames[0] : 1, false});
  } catch (const Error& e) {
    return WorstCaseReport(ref, e.what(), options);
  }

  std::map<int, const IdMap*> pred_masks;
  for (size_t i = 0; i < render.mask_frames.size(); ++i) {
    pred_masks[render.mask_frames[i]] = &render.frames[i].id_map;
  }
  std::map<int, const FlowField*> pred_flows;
  for (size_t i = 0; i < render.flow_frames.size(); ++i) {
    pred_flows[render.flow_frames[i]] = &render.flows[i];
  }
  for (int k : frames) {
    if (!pred_masks.count(k) || !pred_flows.count(k) || !ref.masks.count(k)) {
      return WorstCaseReport(ref, "frame " + std::to_string(k) + " not rendered", options);
    }
  }

  EvalReport report;
  const double scale =
      options.normalize_epe ? 1.0 / std::hypot(ref.width, ref.height) : 1.0;
  const int first = frames.front();
  report.iou_first_frame = FrameIoU(*pred_masks[first], ref.masks.at(first));
  report.epe_first_frame = FrameEpe(*pred_flows[first], ref.flows.at(first)) * scale;
  double iou = 0.0, epe = 0.0;
  for (int k : frames) {
    iou += FrameIoU(*pred_masks[k], ref.masks.at(k));
    epe += FrameEpe(*pred_flows[k], ref.flows.at(k));
  }
  report.iou_full_sequence = iou / frames.size();
  report.epe_full_sequence = epe / frames.size() * scale;

  if (ref_config) {
    report.composition_correct = CompositionAccuracy(pred, *ref_config);
    if (*report.composition_correct) {
      report.param_mae = ComputeParamMae(pred, *ref_config);
      for (const auto& [pi, ri] : MatchObjects(pred, *ref_config)) {
        double sum = 0.0;
        for (int k : frames) {
          const IdMap& a = *pred_masks[k];
          const IdMap& b = ref.masks.at(k);
          long inter = 0, uni = 0;
          for (size_t i = 0; i < a.ids.size(); ++i) {
            const bool in_a = a.ids[i] == pi + 1, in_b = b.ids[i] == ri + 1;
            inter += in_a && in_b;
            uni += in_a || in_b;
          }
          sum += Ratio(inter, uni);
        }
        report.per_object_iou.push_back(sum / frames.size());
      }
    }
  }
  return report;
}

SceneConfig ParseCandidate(const std::string& text) {
  const bool tagged = text.find("<answer>") != std::string::npos ||
                      text.find("</answer>") != std::string::npos ||
                      text.find("<think>") != std::string::npos;
  if (tagged) return ParseConfig(ExtractAnswer(text).config_text);
  return ParseConfig(text);
}

EvalReport EvaluateText(const std::string& text, const ReferenceArtifacts& ref,
                        const SceneConfig* ref_config, const EvalOptions& options) {
  SceneConfig pred;
  try {
    pred = ParseCandidate(text);
  } catch (const Error& e) {
    return WorstCaseReport(ref, e.what(), options);
  }
  return Evaluate(pred, ref, ref_config, options);
}

}  // namespace dynscene

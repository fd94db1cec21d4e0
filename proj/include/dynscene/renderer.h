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

#ifndef DYNSCENE_RENDERER_H_
#define DYNSCENE_RENDERER_H_

#include <cstdint>
#include <vector>

#include "dynscene/camera.h"
#include "dynscene/simulator.h"

namespace dynscene {

// Object-index map: 0 is background or ground, k is config object k-1.
struct IdMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> ids;

  uint8_t at(int x, int y) const { return ids[static_cast<size_t>(y) * width + x]; }
};

// Camera-space depth in meters, +inf where the ray escapes to the sky.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> depth;
};

// Per-pixel displacement (dx, dy) to the next frame, interleaved row-major.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float dx(int x, int y) const { return data[2 * (static_cast<size_t>(y) * width + x)]; }
  float dy(int x, int y) const {
    return data[2 * (static_cast<size_t>(y) * width + x) + 1];
  }
};

struct FrameArtifacts {
  IdMap id_map;
  DepthMap depth;
};

// Rasterizes one rigid state by casting a ray through every pixel center.
FrameArtifacts RenderFrame(const SceneConfig& config, const RigidState& state,
                           const CameraModel& cam);

// Id map and depth for every frame of the trace.
std::vector<FrameArtifacts> RenderMasks(const SimTrace& trace, const CameraModel& cam);

// The video spans the first frame_count - 1 snapshots; the last snapshot
// closes the time window. Flow runs from frame k to k+1 between video
// frames, giving frame_count - 2 fields (29 for a 1 s, 30 FPS trace).
std::vector<FlowField> RenderRawFlow(const SimTrace& trace, const CameraModel& cam);

// Source frame indices kept by stride sampling: 0, stride, ... below
// frame_count - 2.
std::vector<int> FlowSampleFrames(int frame_count, int stride = 3);

// The stride-sampled subset of the raw flow fields, computed directly.
std::vector<FlowField> RenderFlow(const SimTrace& trace, const CameraModel& cam,
                                  int stride = 3);

// Everything a scene evaluation or a dataset record needs in one pass.
struct SceneRender {
  std::vector<int> mask_frames;  // frame index of each entry in `frames`
  std::vector<FrameArtifacts> frames;
  std::vector<int> flow_frames;  // source frame index of each flow field
  std::vector<FlowField> flows;
};

struct SceneRenderOptions {
  bool all_mask_frames = true;  // otherwise only the flow sample frames
  int stride = 3;
  bool depth = true;  // fill FrameArtifacts::depth
};

SceneRender RenderScene(const SimTrace& trace, const CameraModel& cam,
                        const SceneRenderOptions& options = {});

struct Visibility {
  // counts[o][k]: pixels of object o in frame k.
  std::vector<std::vector<int>> counts;
  std::vector<int> max_count;
};

Visibility VisibilitySeries(const std::vector<IdMap>& masks, int object_count);

}  // namespace dynscene

#endif  // DYNSCENE_RENDERER_H_

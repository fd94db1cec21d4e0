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

#include "dynscene/renderer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynscene/collision.h"
#include "dynscene/parallel.h"

namespace dynscene {
namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PlacedShape {
  ConvexShape shape;
  Pose pose;
  // Inclusive pixel rectangle that may contain the silhouette; empty when
  // x0 > x1.
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;
};

std::vector<PlacedShape> Place(const SceneConfig& config, const RigidState& state,
                               const CameraModel& cam) {
  std::vector<PlacedShape> placed;
  placed.reserve(config.objects.size());
  for (size_t i = 0; i < config.objects.size(); ++i) {
    PlacedShape p;
    p.shape = ConvexShape::FromSpec(config.objects[i]);
    p.pose = Pose::From(state[i].position, state[i].orientation);
    const double r = p.shape.BoundingRadius();
    double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
    int behind = 0;
    for (int c = 0; c < 8; ++c) {
      const Vector3d corner =
          p.pose.position + r * Vector3d(c & 1 ? 1 : -1, c & 2 ? 1 : -1, c & 4 ? 1 : -1);
      const auto uv = cam.Project(corner);
      if (!uv) {
        ++behind;
        continue;
      }
      umin = std::min(umin, uv->x());
      umax = std::max(umax, uv->x());
      vmin = std::min(vmin, uv->y());
      vmax = std::max(vmax, uv->y());
    }
    if (behind == 8) {
      placed.push_back(p);
      continue;
    }
    if (behind > 0) {
      p.x0 = 0;
      p.x1 = cam.width - 1;
      p.y0 = 0;
      p.y1 = cam.height - 1;
    } else {
      p.x0 = std::max(0, static_cast<int>(std::floor(umin)) - 1);
      p.x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(umax)) + 1);
      p.y0 = std::max(0, static_cast<int>(std::floor(vmin)) - 1);
      p.y1 = std::min(cam.height - 1, static_cast<int>(std::ceil(vmax)) + 1);
    }
    placed.push_back(p);
  }
  return placed;
}

struct Raster {
  std::vector<uint8_t> ids;
  std::vector<double> depth;
};

Raster Rasterize(const SceneConfig& config, const RigidState& state,
                 const CameraModel& cam) {
  const std::vector<PlacedShape> placed = Place(config, state, cam);
  Raster raster;
  const size_t n = static_cast<size_t>(cam.width) * cam.height;
  raster.ids.assign(n, 0);
  raster.depth.assign(n, kInf);
  const Vector3d step = cam.Ray(1.0, 0.0) - cam.Ray(0.0, 0.0);
  ParallelFor(cam.height, [&](int y) {
    const Vector3d row_start = cam.Ray(0.5, y + 0.5);
    for (int x = 0; x < cam.width; ++x) {
      const Vector3d dir = row_start + x * step;
      double best = kInf;
      uint8_t id = 0;
      if (dir.z() < 0.0) {
        const double t = -cam.position.z() / dir.z();
        if (t > 0.0) best = t;
      }
      for (size_t k = 0; k < placed.size(); ++k) {
        const PlacedShape& p = placed[k];
        if (x < p.x0 || x > p.x1 || y < p.y0 || y > p.y1) continue;
        const Vector3d origin = p.pose.ToLocal(cam.position);
        const Vector3d local_dir = p.pose.rotation.transpose() * dir;
        const auto t = p.shape.Raycast(origin, local_dir);
        if (t && *t < best) {
          best = *t;
          id = static_cast<uint8_t>(k + 1);
        }
      }
      const size_t idx = static_cast<size_t>(y) * cam.width + x;
      raster.ids[idx] = id;
      raster.depth[idx] = best;
    }
  });
  return raster;
}

FrameArtifacts ToArtifacts(const Raster& raster, const CameraModel& cam, bool depth) {
  FrameArtifacts out;
  out.id_map = {cam.width, cam.height, raster.ids};
  if (!depth) return out;
  out.depth.width = cam.width;
  out.depth.height = cam.height;
  out.depth.depth.resize(raster.depth.size());
  for (size_t i = 0; i < raster.depth.size(); ++i) {
    out.depth.depth[i] = static_cast<float>(raster.depth[i]);
  }
  return out;
}

FlowField Flow(const Raster& raster, const RigidState& from, const RigidState& to,
               const CameraModel& cam) {
  FlowField flow;
  flow.width = cam.width;
  flow.height = cam.height;
  flow.data.assign(2 * static_cast<size_t>(cam.width) * cam.height, 0.0f);
  std::vector<Pose> pose_from, pose_to;
  for (size_t k = 0; k < from.size(); ++k) {
    pose_from.push_back(Pose::From(from[k].position, from[k].orientation));
    pose_to.push_back(Pose::From(to[k].position, to[k].orientation));
  }
  ParallelFor(cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const size_t idx = static_cast<size_t>(y) * cam.width + x;
      const int id = raster.ids[idx];
      if (id == 0) continue;
      const Vector3d hit = cam.position + raster.depth[idx] * cam.Ray(x + 0.5, y + 0.5);
      const Vector3d moved = pose_to[id - 1].ToWorld(pose_from[id - 1].ToLocal(hit));
      const auto uv = cam.Project(moved);
      if (!uv) continue;
      flow.data[2 * idx] = static_cast<float>(uv->x() - (x + 0.5));
      flow.data[2 * idx + 1] = static_cast<float>(uv->y() - (y + 0.5));
    }
  });
  return flow;
}

}  // namespace

FrameArtifacts RenderFrame(const SceneConfig& config, const RigidState& state,
                           const CameraModel& cam) {
  return ToArtifacts(Rasterize(config, state, cam), cam, true);
}

std::vector<FrameArtifacts> RenderMasks(const SimTrace& trace, const CameraModel& cam) {
  std::vector<FrameArtifacts> out;
  out.reserve(trace.frames.size());
  for (const TraceFrame& f : trace.frames) {
    out.push_back(RenderFrame(trace.config, f.bodies, cam));
  }
  return out;
}

std::vector<FlowField> RenderRawFlow(const SimTrace& trace, const CameraModel& cam) {
  std::vector<FlowField> out;
  for (size_t k = 0; k + 2 < trace.frames.size(); ++k) {
    const Raster raster = Rasterize(trace.config, trace.frames[k].bodies, cam);
    out.push_back(Flow(raster, trace.frames[k].bodies, trace.frames[k + 1].bodies, cam));
  }
  return out;
}

std::vector<int> FlowSampleFrames(int frame_count, int stride) {
  std::vector<int> out;
  if (stride <= 0) stride = 1;
  for (int k = 0; k + 2 < frame_count; k += stride) out.push_back(k);
  return out;
}

std::vector<FlowField> RenderFlow(const SimTrace& trace, const CameraModel& cam,
                                  int stride) {
  return RenderScene(trace, cam, {false, stride}).flows;
}

SceneRender RenderScene(const SimTrace& trace, const CameraModel& cam,
                        const SceneRenderOptions& options) {
  SceneRender out;
  const int frame_count = static_cast<int>(trace.frames.size());
  out.flow_frames = FlowSampleFrames(frame_count, options.stride);
  std::vector<bool> is_flow_frame(frame_count, false);
  for (int k : out.flow_frames) is_flow_frame[k] = true;
  for (int k = 0; k < frame_count; ++k) {
    if (!options.all_mask_frames && !is_flow_frame[k]) continue;
    const RigidState& state = trace.frames[k].bodies;
    const Raster raster = Rasterize(trace.config, state, cam);
    out.mask_frames.push_back(k);
    out.frames.push_back(ToArtifacts(raster, cam, options.depth));
    if (is_flow_frame[k]) {
      out.flows.push_back(Flow(raster, state, trace.frames[k + 1].bodies, cam));
    }
  }
  return out;
}

Visibility VisibilitySeries(const std::vector<IdMap>& masks, int object_count) {
  Visibility vis;
  vis.counts.assign(object_count, std::vector<int>(masks.size(), 0));
  vis.max_count.assign(object_count, 0);
  for (size_t k = 0; k < masks.size(); ++k) {
    for (uint8_t id : masks[k].ids) {
      if (id > 0 && id <= object_count) ++vis.counts[id - 1][k];
    }
  }
  for (int o = 0; o < object_count; ++o) {
    for (int c : vis.counts[o]) vis.max_count[o] = std::max(vis.max_count[o], c);
  }
  return vis;
}

}  // namespace dynscene

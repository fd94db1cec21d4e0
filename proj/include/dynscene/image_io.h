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

#ifndef DYNSCENE_IMAGE_IO_H_
#define DYNSCENE_IMAGE_IO_H_

#include <string>

#include "dynscene/renderer.h"

namespace dynscene {

// Binary PGM (P5, maxval 255) holding object ids.
void WriteMask(const IdMap& mask, const std::string& path);
IdMap ReadMask(const std::string& path);

// "DFLO" + u32 width + u32 height + row-major float32 (dx, dy) pairs, all
// little-endian.
void WriteFlow(const FlowField& flow, const std::string& path);
FlowField ReadFlow(const std::string& path);

// "DDEP" + u32 width + u32 height + one float32 per pixel.
void WriteDepth(const DepthMap& depth, const std::string& path);
DepthMap ReadDepth(const std::string& path);

}  // namespace dynscene

#endif  // DYNSCENE_IMAGE_IO_H_

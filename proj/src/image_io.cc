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

#include "dynscene/image_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dynscene/errors.h"

namespace dynscene {
namespace {

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteAll(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), bytes.size());
  if (!out) throw IoError("write failed for '" + path + "'");
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(const std::string& in, size_t offset) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<uint8_t>(in[offset + i]);
  return v;
}

void PutF32(std::string& out, float f) {
  uint32_t v;
  std::memcpy(&v, &f, 4);
  PutU32(out, v);
}

float GetF32(const std::string& in, size_t offset) {
  const uint32_t v = GetU32(in, offset);
  float f;
  std::memcpy(&f, &v, 4);
  return f;
}

// Shared reader for the two float raster formats.
std::vector<float> ReadFloatRaster(const std::string& path, const char* magic,
                                   int channels, int& width, int& height) {
  const std::string bytes = ReadAll(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, magic) != 0) {
    throw IoError("'" + path + "' is not a " + magic + " file");
  }
  width = static_cast<int>(GetU32(bytes, 4));
  height = static_cast<int>(GetU32(bytes, 8));
  const size_t count = static_cast<size_t>(width) * height * channels;
  if (bytes.size() != 12 + 4 * count) throw IoError("'" + path + "' has a bad size");
  std::vector<float> data(count);
  for (size_t i = 0; i < count; ++i) data[i] = GetF32(bytes, 12 + 4 * i);
  return data;
}

void WriteFloatRaster(const std::string& path, const char* magic, int width, int height,
                      const std::vector<float>& data) {
  std::string out(magic, 4);
  PutU32(out, static_cast<uint32_t>(width));
  PutU32(out, static_cast<uint32_t>(height));
  out.reserve(out.size() + 4 * data.size());
  for (float f : data) PutF32(out, f);
  WriteAll(path, out);
}

}  // namespace

void WriteMask(const IdMap& mask, const std::string& path) {
  std::string out =
      "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(mask.ids.data()), mask.ids.size());
  WriteAll(path, out);
}

IdMap ReadMask(const std::string& path) {
  const std::string bytes = ReadAll(path);
  std::istringstream header(bytes);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  header >> magic >> width >> height >> maxval;
  if (!header || magic != "P5" || width <= 0 || height <= 0 || maxval != 255) {
    throw IoError("'" + path + "' is not an 8-bit P5 image");
  }
  const size_t offset = static_cast<size_t>(header.tellg()) + 1;
  const size_t count = static_cast<size_t>(width) * height;
  if (bytes.size() != offset + count) throw IoError("'" + path + "' has a bad size");
  IdMap mask{width, height, {}};
  mask.ids.assign(bytes.begin() + offset, bytes.end());
  return mask;
}

void WriteFlow(const FlowField& flow, const std::string& path) {
  WriteFloatRaster(path, "DFLO", flow.width, flow.height, flow.data);
}

FlowField ReadFlow(const std::string& path) {
  FlowField flow;
  flow.data = ReadFloatRaster(path, "DFLO", 2, flow.width, flow.height);
  return flow;
}

void WriteDepth(const DepthMap& depth, const std::string& path) {
  WriteFloatRaster(path, "DDEP", depth.width, depth.height, depth.depth);
}

DepthMap ReadDepth(const std::string& path) {
  DepthMap depth;
  depth.depth = ReadFloatRaster(path, "DDEP", 1, depth.width, depth.height);
  return depth;
}

}  // namespace dynscene

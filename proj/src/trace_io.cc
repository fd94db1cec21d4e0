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

#include <cstdint>
#include <cstring>
#include <fstream>

#include "dynscene/errors.h"
#include "dynscene/simulator.h"

namespace dynscene {
namespace {

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open '" + path + "' for writing");
  }
  void U32(uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 4);
  }
  void F64(double d) {
    uint64_t v;
    std::memcpy(&v, &d, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b), 8);
  }
  void Bytes(const std::string& s) { out_.write(s.data(), s.size()); }
  void Finish(const std::string& path) {
    out_.flush();
    if (!out_) throw IoError("write failed for '" + path + "'");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open '" + path + "'");
  }
  void Read(void* dst, size_t n) {
    in_.read(static_cast<char*>(dst), n);
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw IoError("truncated trace file '" + path_ + "'");
    }
  }
  uint32_t U32() {
    unsigned char b[4];
    Read(b, 4);
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
  }
  double F64() {
    unsigned char b[8];
    Read(b, 8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::string Bytes(size_t n) {
    std::string s(n, '\0');
    Read(s.data(), n);
    return s;
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace

void WriteTrace(const SimTrace& trace, const std::string& path) {
  Writer w(path);
  w.Bytes("DTRC");
  w.U32(static_cast<uint32_t>(trace.config.objects.size()));
  w.U32(static_cast<uint32_t>(trace.frames.size()));
  for (const ObjectSpec& obj : trace.config.objects) {
    w.U32(static_cast<uint32_t>(obj.name.size()));
    w.Bytes(obj.name);
  }
  for (const TraceFrame& frame : trace.frames) {
    w.F64(frame.time);
    for (const BodyState& b : frame.bodies) {
      for (int i = 0; i < 3; ++i) w.F64(b.position[i]);
      w.F64(b.orientation.w());
      w.F64(b.orientation.x());
      w.F64(b.orientation.y());
      w.F64(b.orientation.z());
      for (int i = 0; i < 3; ++i) w.F64(b.linear_velocity[i]);
      for (int i = 0; i < 3; ++i) w.F64(b.angular_velocity[i]);
    }
  }
  w.Finish(path);
}

TraceDump ReadTrace(const std::string& path) {
  Reader r(path);
  if (r.Bytes(4) != "DTRC") throw IoError("'" + path + "' is not a trace dump");
  const uint32_t objects = r.U32();
  const uint32_t frames = r.U32();
  TraceDump dump;
  for (uint32_t i = 0; i < objects; ++i) dump.names.push_back(r.Bytes(r.U32()));
  dump.frames.resize(frames);
  for (TraceFrame& frame : dump.frames) {
    frame.time = r.F64();
    frame.bodies.resize(objects);
    for (BodyState& b : frame.bodies) {
      for (int i = 0; i < 3; ++i) b.position[i] = r.F64();
      const double qw = r.F64(), qx = r.F64(), qy = r.F64(), qz = r.F64();
      b.orientation = Eigen::Quaterniond(qw, qx, qy, qz);
      for (int i = 0; i < 3; ++i) b.linear_velocity[i] = r.F64();
      for (int i = 0; i < 3; ++i) b.angular_velocity[i] = r.F64();
    }
  }
  return dump;
}

}  // namespace dynscene

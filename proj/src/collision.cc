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

#include "dynscene/collision.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dynscene {
namespace {

using Eigen::Vector3d;

constexpr double kPi = 3.14159265358979323846;
constexpr int kRimSamples = 8;

struct SupportPoint {
  Vector3d w;  // a - b
  Vector3d a;
  Vector3d b;
};

// Support mapping of the Minkowski difference A - B in world coordinates.
class MinkowskiDifference {
 public:
  MinkowskiDifference(const ConvexShape& a, const Pose& pa, const ConvexShape& b,
                      const Pose& pb, bool cores)
      : a_(a), pa_(pa), b_(b), pb_(pb), cores_(cores) {}

  SupportPoint operator()(const Vector3d& dir) const {
    const Vector3d la = pa_.rotation.transpose() * dir;
    const Vector3d lb = pb_.rotation.transpose() * (-dir);
    const Vector3d sa = pa_.ToWorld(cores_ ? a_.CoreSupport(la) : a_.Support(la));
    const Vector3d sb = pb_.ToWorld(cores_ ? b_.CoreSupport(lb) : b_.Support(lb));
    return {sa - sb, sa, sb};
  }

 private:
  const ConvexShape& a_;
  const Pose& pa_;
  const ConvexShape& b_;
  const Pose& pb_;
  bool cores_;
};

struct Simplex {
  std::array<SupportPoint, 4> pts;
  std::array<double, 4> bary{};
  int size = 0;
};

// Closest point of a simplex to the origin (Ericson, Real-Time Collision
// Detection, ch. 5). Reduces `s` to the supporting sub-simplex and fills its
// barycentric weights. Returns false when the origin lies inside a
// tetrahedron.
bool ClosestOnTriangle(const SupportPoint& a, const SupportPoint& b,
                       const SupportPoint& c, Simplex& out, Vector3d& v);

bool ClosestOnSegment(const SupportPoint& a, const SupportPoint& b, Simplex& out,
                      Vector3d& v) {
  const Vector3d ab = b.w - a.w;
  const double denom = ab.squaredNorm();
  double t = denom > 0.0 ? -a.w.dot(ab) / denom : 0.0;
  if (t <= 0.0) {
    out.pts[0] = a;
    out.bary[0] = 1.0;
    out.size = 1;
    v = a.w;
  } else if (t >= 1.0) {
    out.pts[0] = b;
    out.bary[0] = 1.0;
    out.size = 1;
    v = b.w;
  } else {
    out.pts[0] = a;
    out.pts[1] = b;
    out.bary[0] = 1.0 - t;
    out.bary[1] = t;
    out.size = 2;
    v = a.w + t * ab;
  }
  return true;
}

bool ClosestOnTriangle(const SupportPoint& pa, const SupportPoint& pb,
                       const SupportPoint& pc, Simplex& out, Vector3d& v) {
  const Vector3d& a = pa.w;
  const Vector3d& b = pb.w;
  const Vector3d& c = pc.w;
  const Vector3d ab = b - a;
  const Vector3d ac = c - a;
  const Vector3d ap = -a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  auto vertex = [&](const SupportPoint& p) {
    out.pts[0] = p;
    out.bary[0] = 1.0;
    out.size = 1;
    v = p.w;
    return true;
  };
  auto edge = [&](const SupportPoint& p, const SupportPoint& q, double t) {
    out.pts[0] = p;
    out.pts[1] = q;
    out.bary[0] = 1.0 - t;
    out.bary[1] = t;
    out.size = 2;
    v = p.w + t * (q.w - p.w);
    return true;
  };
  if (d1 <= 0.0 && d2 <= 0.0) return vertex(pa);
  const Vector3d bp = -b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return vertex(pb);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return edge(pa, pb, d1 / (d1 - d3));
  const Vector3d cp = -c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return vertex(pc);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return edge(pa, pc, d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return edge(pb, pc, (d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  const double sv = vb * denom;
  const double sw = vc * denom;
  out.pts[0] = pa;
  out.pts[1] = pb;
  out.pts[2] = pc;
  out.bary[0] = 1.0 - sv - sw;
  out.bary[1] = sv;
  out.bary[2] = sw;
  out.size = 3;
  v = a + sv * ab + sw * ac;
  return true;
}

bool ClosestOnTetrahedron(const Simplex& s, Simplex& out, Vector3d& v) {
  const auto& p = s.pts;
  // Faces with the index of the opposite vertex.
  static constexpr int kFaces[4][4] = {
      {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 3, 2, 0}};
  double best = std::numeric_limits<double>::infinity();
  bool outside_any = false;
  for (const auto& f : kFaces) {
    const Vector3d& a = p[f[0]].w;
    const Vector3d n = (p[f[1]].w - a).cross(p[f[2]].w - a);
    const double side_origin = n.dot(-a);
    const double side_opposite = n.dot(p[f[3]].w - a);
    if (side_origin * side_opposite >= 0.0 && side_opposite != 0.0) continue;
    outside_any = true;
    Simplex candidate;
    Vector3d cv;
    ClosestOnTriangle(p[f[0]], p[f[1]], p[f[2]], candidate, cv);
    const double d = cv.squaredNorm();
    if (d < best) {
      best = d;
      out = candidate;
      v = cv;
    }
  }
  return outside_any;
}

struct GjkResult {
  bool intersecting = false;
  Vector3d v = Vector3d::Zero();
  Simplex simplex;
};

GjkResult Gjk(const MinkowskiDifference& support, const Vector3d& initial_dir) {
  GjkResult result;
  Vector3d v = initial_dir;
  if (v.squaredNorm() < 1e-24) v = Vector3d::UnitX();
  Simplex& s = result.simplex;
  {
    const SupportPoint w = support(-v);
    s.pts[0] = w;
    s.bary[0] = 1.0;
    s.size = 1;
    v = w.w;
  }
  for (int iter = 0; iter < 96; ++iter) {
    const double vv = v.squaredNorm();
    if (vv < 1e-24) {
      result.intersecting = true;
      break;
    }
    const SupportPoint w = support(-v);
    if (vv - v.dot(w.w) <= 1e-12 * vv + 1e-18) break;
    bool duplicate = false;
    for (int i = 0; i < s.size; ++i) {
      if ((s.pts[i].w - w.w).squaredNorm() < 1e-24) duplicate = true;
    }
    if (duplicate) break;
    s.pts[s.size++] = w;

    Simplex reduced;
    Vector3d nv;
    switch (s.size) {
      case 2:
        ClosestOnSegment(s.pts[0], s.pts[1], reduced, nv);
        break;
      case 3:
        ClosestOnTriangle(s.pts[0], s.pts[1], s.pts[2], reduced, nv);
        break;
      default:
        if (!ClosestOnTetrahedron(s, reduced, nv)) {
          result.intersecting = true;
          result.v = Vector3d::Zero();
          return result;
        }
        break;
    }
    if (nv.squaredNorm() >= vv) {
      // No progress; keep the previous (better) estimate.
      s.size--;
      break;
    }
    s = reduced;
    v = nv;
  }
  result.v = v;
  if (v.squaredNorm() < 1e-24) result.intersecting = true;
  return result;
}

void Witness(const Simplex& s, Vector3d& pa, Vector3d& pb) {
  pa.setZero();
  pb.setZero();
  for (int i = 0; i < s.size; ++i) {
    pa += s.bary[i] * s.pts[i].a;
    pb += s.bary[i] * s.pts[i].b;
  }
}

// Grows a lower-dimensional simplex that touches the origin into a
// tetrahedron so EPA has a volume to expand.
bool BlowUpSimplex(const MinkowskiDifference& support, Simplex& s) {
  constexpr double kEps = 1e-10;
  if (s.size == 1) {
    static const Vector3d kAxes[6] = {Vector3d::UnitX(), -Vector3d::UnitX(),
                                      Vector3d::UnitY(), -Vector3d::UnitY(),
                                      Vector3d::UnitZ(), -Vector3d::UnitZ()};
    for (const Vector3d& d : kAxes) {
      const SupportPoint p = support(d);
      if ((p.w - s.pts[0].w).norm() > kEps) {
        s.pts[s.size++] = p;
        break;
      }
    }
    if (s.size < 2) return false;
  }
  if (s.size == 2) {
    const Vector3d e = (s.pts[1].w - s.pts[0].w).normalized();
    Vector3d axis = Vector3d::Zero();
    int k;
    e.cwiseAbs().minCoeff(&k);
    axis[k] = 1.0;
    const Vector3d perp = e.cross(axis).normalized();
    for (int i = 0; i < 6; ++i) {
      const Eigen::AngleAxisd rot(i * kPi / 3.0, e);
      const SupportPoint p = support(rot * perp);
      const Vector3d rel = p.w - s.pts[0].w;
      if ((rel - rel.dot(e) * e).norm() > kEps) {
        s.pts[s.size++] = p;
        break;
      }
    }
    if (s.size < 3) return false;
  }
  if (s.size == 3) {
    const Vector3d n =
        (s.pts[1].w - s.pts[0].w).cross(s.pts[2].w - s.pts[0].w).normalized();
    SupportPoint p = support(n);
    if (std::abs(n.dot(p.w - s.pts[0].w)) <= kEps) p = support(-n);
    if (std::abs(n.dot(p.w - s.pts[0].w)) <= kEps) return false;
    s.pts[s.size++] = p;
  }
  return true;
}

struct EpaFace {
  std::array<int, 3> v;
  Vector3d normal;
  double distance;
};

struct EpaResult {
  double depth = 0.0;
  Vector3d normal = Vector3d::UnitX();
  Vector3d pa = Vector3d::Zero();
  Vector3d pb = Vector3d::Zero();
};

std::optional<EpaResult> Epa(const MinkowskiDifference& support,
                             const Simplex& tetra) {
  std::vector<SupportPoint> verts(tetra.pts.begin(), tetra.pts.begin() + 4);
  std::vector<EpaFace> faces;
  const Vector3d centroid =
      (verts[0].w + verts[1].w + verts[2].w + verts[3].w) / 4.0;

  auto make_face = [&](int a, int b, int c) -> std::optional<EpaFace> {
    Vector3d n = (verts[b].w - verts[a].w).cross(verts[c].w - verts[a].w);
    const double len = n.norm();
    if (len < 1e-14) return std::nullopt;
    n /= len;
    EpaFace f{{a, b, c}, n, n.dot(verts[a].w)};
    return f;
  };
  // Initial faces, wound so normals point away from the centroid.
  static constexpr int kInit[4][3] = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  for (const auto& f : kInit) {
    auto face = make_face(f[0], f[1], f[2]);
    if (!face) return std::nullopt;
    if (face->normal.dot(verts[f[0]].w - centroid) < 0.0) {
      face = make_face(f[0], f[2], f[1]);
    }
    faces.push_back(*face);
  }

  for (int iter = 0; iter < 128; ++iter) {
    size_t closest = 0;
    for (size_t i = 1; i < faces.size(); ++i) {
      if (faces[i].distance < faces[closest].distance) closest = i;
    }
    const EpaFace face = faces[closest];
    const SupportPoint w = support(face.normal);
    const double gain = w.w.dot(face.normal) - face.distance;
    if (gain < 1e-7 || iter == 127) {
      EpaResult r;
      r.depth = face.distance;
      r.normal = face.normal;
      // Barycentric coordinates of the origin's projection on the face.
      const Vector3d p = face.normal * face.distance;
      const Vector3d& a = verts[face.v[0]].w;
      const Vector3d v0 = verts[face.v[1]].w - a;
      const Vector3d v1 = verts[face.v[2]].w - a;
      const Vector3d v2 = p - a;
      const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
      const double d20 = v2.dot(v0), d21 = v2.dot(v1);
      const double denom = d00 * d11 - d01 * d01;
      double bv = 1.0 / 3.0, bw = 1.0 / 3.0;
      if (std::abs(denom) > 1e-20) {
        bv = (d11 * d20 - d01 * d21) / denom;
        bw = (d00 * d21 - d01 * d20) / denom;
      }
      const double bu = 1.0 - bv - bw;
      r.pa = bu * verts[face.v[0]].a + bv * verts[face.v[1]].a + bw * verts[face.v[2]].a;
      r.pb = bu * verts[face.v[0]].b + bv * verts[face.v[1]].b + bw * verts[face.v[2]].b;
      return r;
    }
    const int wi = static_cast<int>(verts.size());
    verts.push_back(w);
    std::vector<std::pair<int, int>> horizon;
    std::vector<EpaFace> kept;
    for (const EpaFace& f : faces) {
      if (f.normal.dot(w.w - verts[f.v[0]].w) > 1e-12) {
        for (int e = 0; e < 3; ++e) {
          const std::pair<int, int> edge{f.v[e], f.v[(e + 1) % 3]};
          auto it = std::find(horizon.begin(), horizon.end(),
                              std::pair<int, int>{edge.second, edge.first});
          if (it != horizon.end()) {
            horizon.erase(it);
          } else {
            horizon.push_back(edge);
          }
        }
      } else {
        kept.push_back(f);
      }
    }
    faces = std::move(kept);
    for (const auto& [a, b] : horizon) {
      if (auto f = make_face(a, b, wi)) faces.push_back(*f);
    }
    if (faces.empty()) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

ConvexShape ConvexShape::Sphere(double radius) {
  ConvexShape s;
  s.kind_ = Shape::kSphere;
  s.radius_ = radius;
  return s;
}

ConvexShape ConvexShape::Box(const Eigen::Vector3d& half_extents) {
  ConvexShape s;
  s.kind_ = Shape::kBox;
  s.half_extents_ = half_extents;
  return s;
}

ConvexShape ConvexShape::Cylinder(double radius, double half_height) {
  ConvexShape s;
  s.kind_ = Shape::kCylinder;
  s.radius_ = radius;
  s.half_height_ = half_height;
  return s;
}

ConvexShape ConvexShape::FromSpec(const ObjectSpec& spec) {
  switch (spec.shape) {
    case Shape::kSphere: return Sphere(spec.radius);
    case Shape::kBox: return Box(spec.size);
    case Shape::kCylinder: return Cylinder(spec.radius, 0.5 * spec.height);
  }
  return Sphere(spec.radius);
}

Vector3d ConvexShape::Support(const Vector3d& d) const {
  switch (kind_) {
    case Shape::kSphere: {
      const double n = d.norm();
      return n > 0.0 ? Vector3d(radius_ * d / n) : Vector3d(radius_, 0.0, 0.0);
    }
    case Shape::kBox:
      return {d.x() < 0.0 ? -half_extents_.x() : half_extents_.x(),
              d.y() < 0.0 ? -half_extents_.y() : half_extents_.y(),
              d.z() < 0.0 ? -half_extents_.z() : half_extents_.z()};
    case Shape::kCylinder:
      break;
  }
  const double radial = std::hypot(d.x(), d.y());
  Vector3d s(0.0, 0.0, d.z() < 0.0 ? -half_height_ : half_height_);
  if (radial > 1e-12) {
    s.x() = radius_ * d.x() / radial;
    s.y() = radius_ * d.y() / radial;
  }
  return s;
}

Vector3d ConvexShape::CoreSupport(const Vector3d& d) const {
  if (kind_ == Shape::kSphere) return Vector3d::Zero();
  return Support(d);
}

double ConvexShape::BoundingRadius() const {
  switch (kind_) {
    case Shape::kSphere: return radius_;
    case Shape::kBox: return half_extents_.norm();
    case Shape::kCylinder: return std::hypot(radius_, half_height_);
  }
  return radius_;
}

double ConvexShape::RollingRadius() const {
  return kind_ == Shape::kBox ? half_extents_.minCoeff() : radius_;
}

Vector3d ConvexShape::Inertia(double mass) const {
  switch (kind_) {
    case Shape::kSphere: {
      const double i = 0.4 * mass * radius_ * radius_;
      return {i, i, i};
    }
    case Shape::kBox: {
      const Vector3d h2 = half_extents_.cwiseProduct(half_extents_);
      return mass / 3.0 * Vector3d(h2.y() + h2.z(), h2.x() + h2.z(), h2.x() + h2.y());
    }
    case Shape::kCylinder:
      break;
  }
  const double r2 = radius_ * radius_;
  const double lateral = mass * (3.0 * r2 + 4.0 * half_height_ * half_height_) / 12.0;
  return {lateral, lateral, 0.5 * mass * r2};
}

std::optional<double> ConvexShape::Raycast(const Vector3d& o, const Vector3d& d,
                                           double t_min) const {
  switch (kind_) {
    case Shape::kSphere: {
      const double a = d.squaredNorm();
      const double b = o.dot(d);
      const double c = o.squaredNorm() - radius_ * radius_;
      const double disc = b * b - a * c;
      if (disc < 0.0 || a <= 0.0) return std::nullopt;
      const double sq = std::sqrt(disc);
      const double t0 = (-b - sq) / a;
      if (t0 > t_min) return t0;
      const double t1 = (-b + sq) / a;
      if (t1 > t_min) return t1;
      return std::nullopt;
    }
    case Shape::kBox: {
      double t_near = -std::numeric_limits<double>::infinity();
      double t_far = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 3; ++i) {
        const double h = half_extents_[i];
        if (std::abs(d[i]) < 1e-15) {
          if (std::abs(o[i]) > h) return std::nullopt;
          continue;
        }
        double t0 = (-h - o[i]) / d[i];
        double t1 = (h - o[i]) / d[i];
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return std::nullopt;
      }
      if (t_near > t_min) return t_near;
      if (t_far > t_min) return t_far;
      return std::nullopt;
    }
    case Shape::kCylinder:
      break;
  }
  double best = std::numeric_limits<double>::infinity();
  const double r2 = radius_ * radius_;
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 1e-15) {
    const double b = o.x() * d.x() + o.y() * d.y();
    const double c = o.x() * o.x() + o.y() * o.y() - r2;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / a, (-b + sq) / a}) {
        if (t > t_min && t < best && std::abs(o.z() + t * d.z()) <= half_height_) {
          best = t;
        }
      }
    }
  }
  if (std::abs(d.z()) > 1e-15) {
    for (double z : {-half_height_, half_height_}) {
      const double t = (z - o.z()) / d.z();
      if (t <= t_min || t >= best) continue;
      const double x = o.x() + t * d.x();
      const double y = o.y() + t * d.y();
      if (x * x + y * y <= r2) best = t;
    }
  }
  if (std::isfinite(best)) return best;
  return std::nullopt;
}

std::vector<ContactPoint> GroundContacts(const ConvexShape& shape,
                                         const Pose& pose, double margin) {
  std::vector<ContactPoint> out;
  auto add = [&](const Vector3d& p) {
    if (p.z() < margin) out.push_back({p, Vector3d::UnitZ(), p.z()});
  };
  switch (shape.kind()) {
    case Shape::kSphere:
      add(pose.position - shape.radius() * Vector3d::UnitZ());
      break;
    case Shape::kBox: {
      const Vector3d& h = shape.half_extents();
      for (int i = 0; i < 8; ++i) {
        const Vector3d local((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                             (i & 4) ? h.z() : -h.z());
        add(pose.ToWorld(local));
      }
      break;
    }
    case Shape::kCylinder: {
      const Vector3d axis = pose.rotation.col(2);
      Vector3d down = -Vector3d::UnitZ() + axis.z() * axis;
      if (down.norm() < 1e-6) {
        down = pose.rotation.col(0);
      } else {
        down.normalize();
      }
      const Vector3d side = axis.cross(down);
      for (double sign : {-1.0, 1.0}) {
        const Vector3d cap = pose.position + sign * shape.half_height() * axis;
        for (int k = 0; k < kRimSamples; ++k) {
          const double theta = 2.0 * kPi * k / kRimSamples;
          add(cap + shape.radius() * (std::cos(theta) * down + std::sin(theta) * side));
        }
      }
      break;
    }
  }
  return out;
}

double GroundClearance(const ConvexShape& shape, const Pose& pose) {
  const Vector3d local_down = pose.rotation.transpose() * (-Vector3d::UnitZ());
  return pose.ToWorld(shape.Support(local_down)).z();
}

DistanceResult ShapeDistance(const ConvexShape& a, const Pose& pose_a,
                             const ConvexShape& b, const Pose& pose_b) {
  DistanceResult r;
  if (a.kind() == Shape::kSphere && b.kind() == Shape::kSphere) {
    const Vector3d d = pose_b.position - pose_a.position;
    const double len = d.norm();
    r.normal = len > 1e-12 ? Vector3d(d / len) : Vector3d::UnitX();
    r.distance = len - a.radius() - b.radius();
    r.point_a = pose_a.position + a.radius() * r.normal;
    r.point_b = pose_b.position - b.radius() * r.normal;
    return r;
  }

  const Vector3d initial = pose_a.position - pose_b.position;
  const MinkowskiDifference cores(a, pose_a, b, pose_b, /*cores=*/true);
  GjkResult gjk = Gjk(cores, initial);
  const double core_dist = gjk.v.norm();
  if (!gjk.intersecting && core_dist > 1e-9) {
    Vector3d pa, pb;
    Witness(gjk.simplex, pa, pb);
    r.normal = -gjk.v / core_dist;
    r.distance = core_dist - a.margin() - b.margin();
    r.point_a = pa + a.margin() * r.normal;
    r.point_b = pb - b.margin() * r.normal;
    return r;
  }

  const MinkowskiDifference full(a, pose_a, b, pose_b, /*cores=*/false);
  if (a.margin() > 0.0 || b.margin() > 0.0) gjk = Gjk(full, initial);
  Simplex tetra = gjk.simplex;
  std::optional<EpaResult> epa;
  if (gjk.intersecting && BlowUpSimplex(full, tetra)) epa = Epa(full, tetra);
  if (epa) {
    r.distance = -epa->depth;
    r.normal = epa->normal;
    r.point_a = epa->pa;
    r.point_b = epa->pb;
    return r;
  }
  // Degenerate fallback: separate along the line of centers.
  Vector3d n = pose_b.position - pose_a.position;
  n = n.norm() > 1e-12 ? Vector3d(n.normalized()) : Vector3d::UnitZ();
  const SupportPoint s = full(n);
  r.normal = n;
  r.distance = -std::max(0.0, s.w.dot(n));
  r.point_a = s.a;
  r.point_b = s.b;
  return r;
}

std::optional<ContactPoint> ShapeContact(const ConvexShape& a, const Pose& pose_a,
                                         const ConvexShape& b, const Pose& pose_b,
                                         double margin) {
  const double centers = (pose_a.position - pose_b.position).norm();
  if (centers > a.BoundingRadius() + b.BoundingRadius() + margin) return std::nullopt;
  const DistanceResult d = ShapeDistance(a, pose_a, b, pose_b);
  if (d.distance >= margin) return std::nullopt;
  return ContactPoint{0.5 * (d.point_a + d.point_b), d.normal, d.distance};
}

}  // namespace dynscene

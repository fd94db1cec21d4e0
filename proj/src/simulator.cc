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

#include "dynscene/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "dynscene/collision.h"
#include "dynscene/errors.h"

namespace dynscene {
namespace {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector3d;

constexpr double kDivergenceRadius = 1e4;
constexpr double kTouchDistance = 1e-4;
constexpr double kOverlapDepth = 1e-4;

Matrix3d Skew(const Vector3d& v) {
  Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

struct Body {
  ConvexShape shape;
  double mass = 1.0;
  double inv_mass = 1.0;
  Vector3d inertia = Vector3d::Ones();  // body-frame principal moments
  double drag = 0.0;                    // 10^damping
  double slide_friction = 0.0;
  double roll_friction = 0.0;

  Vector3d x = Vector3d::Zero();
  Quaterniond q = Quaterniond::Identity();
  Vector3d v = Vector3d::Zero();
  Vector3d w = Vector3d::Zero();

  // Derived per substep.
  Matrix3d rotation = Matrix3d::Identity();
  Matrix3d inv_inertia_world = Matrix3d::Identity();
  Matrix3d inertia_world = Matrix3d::Identity();
  // Split-impulse pseudo velocities.
  Vector3d pv = Vector3d::Zero();
  Vector3d pw = Vector3d::Zero();
  bool constrained = false;

  void UpdateDerived() {
    rotation = q.toRotationMatrix();
    inertia_world = rotation * inertia.asDiagonal() * rotation.transpose();
    inv_inertia_world =
        rotation * inertia.cwiseInverse().asDiagonal() * rotation.transpose();
  }
  Pose pose() const { return {x, rotation}; }
};

struct Contact {
  int a = -1;  // -1 = ground
  int b = 0;
  Vector3d point, normal, ra, rb, t1, t2;
  double separation = 0.0;
  double mass_n = 0.0, mass_t1 = 0.0, mass_t2 = 0.0;
  double mass_r1 = 0.0, mass_r2 = 0.0;
  double mu = 0.0, mu_roll = 0.0, roll_radius = 0.0;
  double target = 0.0;
  double pseudo_target = 0.0;
  double lambda_n = 0.0, lambda_t1 = 0.0, lambda_t2 = 0.0;
  double lambda_r1 = 0.0, lambda_r2 = 0.0;
  double lambda_p = 0.0;
  Vector3d tangential_pre = Vector3d::Zero();
};

void Tangents(const Vector3d& n, Vector3d& t1, Vector3d& t2) {
  if (std::abs(n.x()) < 0.57735) {
    t1 = n.cross(Vector3d::UnitX()).normalized();
  } else {
    t1 = n.cross(Vector3d::UnitY()).normalized();
  }
  t2 = n.cross(t1);
}

// Exponential-integrator weights for v' = g - c v over one step h = c dt.
void DragWeights(double h, double& decay, double& phi1, double& phi2) {
  if (h < 1e-5) {
    decay = 1.0 - h + 0.5 * h * h;
    phi1 = 1.0 - h / 2.0 + h * h / 6.0;
    phi2 = 0.5 - h / 6.0 + h * h / 24.0;
    return;
  }
  decay = std::exp(-h);
  phi1 = -std::expm1(-h) / h;
  phi2 = (1.0 - phi1) / h;
}

class World {
 public:
  // Phase one: static model.
  World(const SceneConfig& config, const SimOptions& options)
      : config_(config), options_(options) {
    gravity_ = config.gravity.vector;
    dt_ = 1.0 / (options.fps * static_cast<double>(options.substeps));
    for (const ObjectSpec& spec : config.objects) {
      Body b;
      b.shape = ConvexShape::FromSpec(spec);
      b.mass = spec.physics.mass;
      b.inv_mass = 1.0 / spec.physics.mass;
      b.inertia = b.shape.Inertia(spec.physics.mass);
      b.drag = std::pow(10.0, spec.physics.damping);
      b.slide_friction = spec.physics.slide_friction;
      b.roll_friction = spec.physics.roll_friction;
      bodies_.push_back(b);
    }
  }

  // Phase two: dynamic state.
  void SetInitialState(const SceneConfig& config) {
    for (size_t i = 0; i < bodies_.size(); ++i) {
      const ObjectState& s = config.objects[i].state;
      bodies_[i].x = s.position;
      bodies_[i].q = s.orientation.normalized();
      bodies_[i].v = s.linear_velocity;
      bodies_[i].w = s.angular_velocity;
    }
  }

  RigidState Snapshot() const {
    RigidState out;
    out.reserve(bodies_.size());
    for (const Body& b : bodies_) out.push_back({b.x, b.q, b.v, b.w});
    return out;
  }

  void Step(long substep_index, std::vector<ContactEvent>& events);

 private:
  void BuildContacts();
  void PrepareContact(Contact& c);
  void ApplyImpulse(int index, const Vector3d& impulse, const Vector3d& r);
  void ApplyPseudoImpulse(int index, const Vector3d& impulse, const Vector3d& r);
  Vector3d PointVelocity(int index, const Vector3d& r) const;
  void IntegrateForces(std::vector<Vector3d>& v_start);
  void SolveVelocities();
  void SolvePositions();
  void IntegratePositions(const std::vector<Vector3d>& v_start);
  void RecordEvents(long substep_index, std::vector<ContactEvent>& events);

  const SceneConfig& config_;
  const SimOptions& options_;
  Vector3d gravity_;
  double dt_;
  std::vector<Body> bodies_;
  std::vector<Contact> contacts_;
  std::map<std::pair<int, int>, long> last_touch_;
};

Vector3d World::PointVelocity(int index, const Vector3d& r) const {
  if (index < 0) return Vector3d::Zero();
  const Body& b = bodies_[index];
  return b.v + b.w.cross(r);
}

void World::ApplyImpulse(int index, const Vector3d& impulse, const Vector3d& r) {
  if (index < 0) return;
  Body& b = bodies_[index];
  b.v += b.inv_mass * impulse;
  b.w += b.inv_inertia_world * r.cross(impulse);
}

void World::ApplyPseudoImpulse(int index, const Vector3d& impulse, const Vector3d& r) {
  if (index < 0) return;
  Body& b = bodies_[index];
  b.pv += b.inv_mass * impulse;
  b.pw += b.inv_inertia_world * r.cross(impulse);
}

double SpeculativeMargin(const Body& b, double dt) {
  return 5e-3 + 2.0 * (b.v.norm() + b.w.norm() * b.shape.BoundingRadius()) * dt;
}

void World::BuildContacts() {
  contacts_.clear();
  const int n = static_cast<int>(bodies_.size());
  for (int i = 0; i < n; ++i) {
    const Body& b = bodies_[i];
    for (const ContactPoint& cp :
         GroundContacts(b.shape, b.pose(), SpeculativeMargin(b, dt_))) {
      Contact c;
      c.a = -1;
      c.b = i;
      c.point = cp.point;
      c.normal = cp.normal;
      c.separation = cp.separation;
      c.mu = b.slide_friction;
      c.mu_roll = b.roll_friction;
      c.roll_radius = b.shape.RollingRadius();
      contacts_.push_back(c);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Body& a = bodies_[i];
      const Body& b = bodies_[j];
      const double margin = SpeculativeMargin(a, dt_) + SpeculativeMargin(b, dt_);
      auto cp = ShapeContact(a.shape, a.pose(), b.shape, b.pose(), margin);
      if (!cp) continue;
      Contact c;
      c.a = i;
      c.b = j;
      c.point = cp->point;
      c.normal = cp->normal;
      c.separation = cp->separation;
      c.mu = std::max(a.slide_friction, b.slide_friction);
      c.mu_roll = std::max(a.roll_friction, b.roll_friction);
      c.roll_radius = std::min(a.shape.RollingRadius(), b.shape.RollingRadius());
      contacts_.push_back(c);
    }
  }
  for (Contact& c : contacts_) PrepareContact(c);
}

void World::PrepareContact(Contact& c) {
  c.ra = c.a >= 0 ? Vector3d(c.point - bodies_[c.a].x) : Vector3d::Zero();
  c.rb = c.point - bodies_[c.b].x;
  Tangents(c.normal, c.t1, c.t2);

  auto effective_mass = [&](const Vector3d& dir) {
    double k = 0.0;
    if (c.a >= 0) {
      const Body& a = bodies_[c.a];
      const Vector3d rn = c.ra.cross(dir);
      k += a.inv_mass + rn.dot(a.inv_inertia_world * rn);
    }
    const Body& b = bodies_[c.b];
    const Vector3d rn = c.rb.cross(dir);
    k += b.inv_mass + rn.dot(b.inv_inertia_world * rn);
    return k > 0.0 ? 1.0 / k : 0.0;
  };
  auto angular_mass = [&](const Vector3d& dir) {
    double k = dir.dot(bodies_[c.b].inv_inertia_world * dir);
    if (c.a >= 0) k += dir.dot(bodies_[c.a].inv_inertia_world * dir);
    return k > 0.0 ? 1.0 / k : 0.0;
  };
  c.mass_n = effective_mass(c.normal);
  c.mass_t1 = effective_mass(c.t1);
  c.mass_t2 = effective_mass(c.t2);
  c.mass_r1 = angular_mass(c.t1);
  c.mass_r2 = angular_mass(c.t2);
}

void World::IntegrateForces(std::vector<Vector3d>& v_start) {
  v_start.resize(bodies_.size());
  for (size_t i = 0; i < bodies_.size(); ++i) {
    Body& b = bodies_[i];
    v_start[i] = b.v;
    double decay, phi1, phi2;
    DragWeights(b.drag * b.inv_mass * dt_, decay, phi1, phi2);
    b.v = decay * b.v + gravity_ * dt_ * phi1;

    // Gyroscopic term, one implicit Newton step in the body frame; it is not
    // allowed to add rotational energy.
    const Matrix3d& rot = b.rotation;
    const Vector3d w1 = rot.transpose() * b.w;
    const Matrix3d inertia = b.inertia.asDiagonal();
    const Vector3d iw1 = inertia * w1;
    const Vector3d f = dt_ * w1.cross(iw1);
    if (f.squaredNorm() > 0.0) {
      const Matrix3d jac = inertia + dt_ * (Skew(w1) * inertia - Skew(iw1));
      Vector3d w2 = w1 - jac.partialPivLu().solve(f);
      const double e1 = w1.dot(iw1);
      const double e2 = w2.dot(inertia * w2);
      if (e2 > e1 && e2 > 0.0) w2 *= std::sqrt(e1 / e2);
      b.w = rot * w2;
    }
    // Angular drag -k w, implicit.
    if (b.drag > 0.0) {
      const Matrix3d lhs = b.inertia_world + b.drag * dt_ * Matrix3d::Identity();
      b.w = lhs.ldlt().solve(b.inertia_world * b.w);
    }
    b.pv.setZero();
    b.pw.setZero();
    b.constrained = false;
  }
}

void World::SolveVelocities() {
  for (Contact& c : contacts_) {
    const Vector3d vrel = PointVelocity(c.b, c.rb) - PointVelocity(c.a, c.ra);
    const double vn = vrel.dot(c.normal);
    c.tangential_pre = vrel - vn * c.normal;
    c.target = c.separation > 0.0 ? -c.separation / dt_ : 0.0;
    if (options_.restitution > 0.0 && vn < -0.05) {
      c.target = std::max(c.target, -options_.restitution * vn);
    }
    c.pseudo_target =
        c.separation < -options_.slop
            ? options_.baumgarte * (-c.separation - options_.slop) / dt_
            : 0.0;
  }
  for (int iter = 0; iter < options_.solver_iterations; ++iter) {
    for (Contact& c : contacts_) {
      // Normal.
      {
        const Vector3d vrel = PointVelocity(c.b, c.rb) - PointVelocity(c.a, c.ra);
        const double vn = vrel.dot(c.normal);
        const double delta = c.mass_n * (c.target - vn);
        const double updated = std::max(c.lambda_n + delta, 0.0);
        const double applied = updated - c.lambda_n;
        c.lambda_n = updated;
        ApplyImpulse(c.b, applied * c.normal, c.rb);
        ApplyImpulse(c.a, -applied * c.normal, c.ra);
      }
      // Sliding friction, clamped to the Coulomb disk.
      {
        const Vector3d vrel = PointVelocity(c.b, c.rb) - PointVelocity(c.a, c.ra);
        double l1 = c.lambda_t1 - c.mass_t1 * vrel.dot(c.t1);
        double l2 = c.lambda_t2 - c.mass_t2 * vrel.dot(c.t2);
        const double limit = c.mu * c.lambda_n;
        const double mag = std::hypot(l1, l2);
        if (mag > limit) {
          const double s = mag > 0.0 ? limit / mag : 0.0;
          l1 *= s;
          l2 *= s;
        }
        const Vector3d applied = (l1 - c.lambda_t1) * c.t1 + (l2 - c.lambda_t2) * c.t2;
        c.lambda_t1 = l1;
        c.lambda_t2 = l2;
        ApplyImpulse(c.b, applied, c.rb);
        ApplyImpulse(c.a, -applied, c.ra);
      }
      // Rolling resistance on the tangential relative spin.
      if (c.mu_roll > 0.0) {
        Vector3d wrel = bodies_[c.b].w;
        if (c.a >= 0) wrel -= bodies_[c.a].w;
        double l1 = c.lambda_r1 - c.mass_r1 * wrel.dot(c.t1);
        double l2 = c.lambda_r2 - c.mass_r2 * wrel.dot(c.t2);
        const double limit = c.mu_roll * c.lambda_n * c.roll_radius;
        const double mag = std::hypot(l1, l2);
        if (mag > limit) {
          const double s = mag > 0.0 ? limit / mag : 0.0;
          l1 *= s;
          l2 *= s;
        }
        const Vector3d applied = (l1 - c.lambda_r1) * c.t1 + (l2 - c.lambda_r2) * c.t2;
        c.lambda_r1 = l1;
        c.lambda_r2 = l2;
        bodies_[c.b].w += bodies_[c.b].inv_inertia_world * applied;
        if (c.a >= 0) bodies_[c.a].w -= bodies_[c.a].inv_inertia_world * applied;
      }
    }
  }
  for (const Contact& c : contacts_) {
    const bool active = c.lambda_n > 0.0;
    if (!active) continue;
    bodies_[c.b].constrained = true;
    if (c.a >= 0) bodies_[c.a].constrained = true;
  }
}

void World::SolvePositions() {
  bool any = false;
  for (const Contact& c : contacts_) any = any || c.pseudo_target > 0.0;
  if (!any) return;
  for (int iter = 0; iter < options_.solver_iterations; ++iter) {
    for (Contact& c : contacts_) {
      if (c.pseudo_target <= 0.0) continue;
      Vector3d vb = bodies_[c.b].pv + bodies_[c.b].pw.cross(c.rb);
      Vector3d va = Vector3d::Zero();
      if (c.a >= 0) va = bodies_[c.a].pv + bodies_[c.a].pw.cross(c.ra);
      const double vn = (vb - va).dot(c.normal);
      const double updated = std::max(c.lambda_p + c.mass_n * (c.pseudo_target - vn), 0.0);
      const double applied = updated - c.lambda_p;
      c.lambda_p = updated;
      ApplyPseudoImpulse(c.b, applied * c.normal, c.rb);
      ApplyPseudoImpulse(c.a, -applied * c.normal, c.ra);
    }
  }
  for (const Contact& c : contacts_) {
    if (c.lambda_p <= 0.0) continue;
    bodies_[c.b].constrained = true;
    if (c.a >= 0) bodies_[c.a].constrained = true;
  }
}

void World::IntegratePositions(const std::vector<Vector3d>& v_start) {
  for (size_t i = 0; i < bodies_.size(); ++i) {
    Body& b = bodies_[i];
    if (b.constrained) {
      b.x += (b.v + b.pv) * dt_;
    } else {
      // Closed-form update for gravity plus linear drag.
      double decay, phi1, phi2;
      DragWeights(b.drag * b.inv_mass * dt_, decay, phi1, phi2);
      b.x += v_start[i] * dt_ * phi1 + gravity_ * dt_ * dt_ * phi2;
    }
    const Vector3d spin = b.w + b.pw;
    const Quaterniond dq(0.0, spin.x(), spin.y(), spin.z());
    Quaterniond q = b.q;
    q.coeffs() += 0.5 * dt_ * (dq * b.q).coeffs();
    b.q = q.normalized();
  }
}

void World::RecordEvents(long substep_index, std::vector<ContactEvent>& events) {
  const double time = substep_index * dt_;
  // Aggregate per pair in deterministic (a, b) order.
  std::map<std::pair<int, int>, std::pair<bool, double>> touching;
  for (const Contact& c : contacts_) {
    auto& entry = touching[{c.a, c.b}];
    entry.first = entry.first || c.lambda_n > 0.0 || c.separation <= kTouchDistance;
    entry.second += c.lambda_n;
  }
  const long gap = 2L * options_.substeps;
  for (const auto& [pair, state] : touching) {
    if (!state.first) continue;
    auto it = last_touch_.find(pair);
    const bool onset = it == last_touch_.end() || substep_index - it->second > gap;
    last_touch_[pair] = substep_index;
    if (!onset) continue;
    ContactEvent e;
    e.time = time;
    e.impulse = state.second;
    if (pair.first < 0) {
      e.kind = ContactKind::kObjectGround;
      e.participants = {config_.objects[pair.second].name};
    } else {
      e.kind = ContactKind::kObjectObject;
      e.participants = {config_.objects[pair.first].name,
                        config_.objects[pair.second].name};
    }
    events.push_back(std::move(e));
  }
}

void World::Step(long substep_index, std::vector<ContactEvent>& events) {
  for (Body& b : bodies_) b.UpdateDerived();
  BuildContacts();
  std::vector<Vector3d> v_start;
  IntegrateForces(v_start);
  SolveVelocities();
  SolvePositions();
  if (options_.on_contacts) {
    std::vector<ContactSample> samples;
    samples.reserve(contacts_.size());
    for (const Contact& c : contacts_) {
      samples.push_back({c.a, c.b, c.normal, c.tangential_pre,
                         c.lambda_t1 * c.t1 + c.lambda_t2 * c.t2, c.lambda_n});
    }
    options_.on_contacts(substep_index * dt_, samples);
  }
  IntegratePositions(v_start);
  RecordEvents(substep_index, events);
  for (size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    if (!b.x.allFinite() || b.x.norm() > kDivergenceRadius || !b.v.allFinite() ||
        !b.w.allFinite()) {
      throw DivergenceError("body '" + config_.objects[i].name +
                            "' diverged at t=" + std::to_string(substep_index * dt_));
    }
  }
}

}  // namespace

SimTrace Simulate(const SceneConfig& config, const SimOptions& options) {
  const auto violations = Validate(config);
  if (!violations.empty()) {
    throw ConfigError(violations.front().path + ": " + violations.front().rule);
  }
  if (options.fps <= 0 || options.substeps <= 0 || !(options.duration >= 0.0)) {
    throw ConfigError("fps, substeps and duration must be positive");
  }
  SimTrace trace;
  trace.config = config;
  trace.fps = options.fps;
  trace.substeps = options.substeps;

  World world(config, options);
  world.SetInitialState(config);

  const long frame_count =
      static_cast<long>(std::ceil(options.duration * options.fps - 1e-9));
  trace.frames.reserve(frame_count + 1);
  trace.frames.push_back({0.0, world.Snapshot()});
  long substep = 0;
  for (long k = 1; k <= frame_count; ++k) {
    for (int s = 0; s < options.substeps; ++s) world.Step(substep++, trace.contacts);
    trace.frames.push_back({static_cast<double>(k) / options.fps, world.Snapshot()});
  }
  std::stable_sort(trace.contacts.begin(), trace.contacts.end(),
                   [](const ContactEvent& a, const ContactEvent& b) {
                     return a.time < b.time;
                   });
  return trace;
}

std::vector<std::pair<std::string, std::string>> DetectInitialOverlap(
    const SceneConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<ConvexShape> shapes;
  std::vector<Pose> poses;
  for (const ObjectSpec& obj : config.objects) {
    shapes.push_back(ConvexShape::FromSpec(obj));
    poses.push_back(Pose::From(obj.state.position, obj.state.orientation.normalized()));
  }
  for (size_t i = 0; i < shapes.size(); ++i) {
    if (GroundClearance(shapes[i], poses[i]) < -kOverlapDepth) {
      out.emplace_back(config.objects[i].name, kGroundName);
    }
  }
  for (size_t i = 0; i < shapes.size(); ++i) {
    for (size_t j = i + 1; j < shapes.size(); ++j) {
      const double centers = (poses[i].position - poses[j].position).norm();
      if (centers > shapes[i].BoundingRadius() + shapes[j].BoundingRadius()) continue;
      if (ShapeDistance(shapes[i], poses[i], shapes[j], poses[j]).distance <
          -kOverlapDepth) {
        out.emplace_back(config.objects[i].name, config.objects[j].name);
      }
    }
  }
  return out;
}

double TotalEnergy(const SceneConfig& config, const RigidState& state) {
  double energy = 0.0;
  const double g = -config.gravity.vector.z();
  for (size_t i = 0; i < state.size(); ++i) {
    const ObjectSpec& spec = config.objects[i];
    const BodyState& s = state[i];
    const double m = spec.physics.mass;
    const Vector3d inertia = ConvexShape::FromSpec(spec).Inertia(m);
    const Vector3d wb = s.orientation.toRotationMatrix().transpose() * s.angular_velocity;
    energy += 0.5 * m * s.linear_velocity.squaredNorm() +
              0.5 * wb.dot(inertia.cwiseProduct(wb)) + m * g * s.position.z();
  }
  return energy;
}

}  // namespace dynscene

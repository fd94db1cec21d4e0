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

#include "dynscene/search.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "dynscene/cmaes.h"
#include "dynscene/errors.h"
#include "dynscene/parallel.h"

namespace dynscene {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Range SlotRange(const ParamSlot& slot, const SamplingRanges& r) {
  switch (slot.kind) {
    case SlotKind::kRadius: return r.radius;
    case SlotKind::kHeight: return r.cylinder_height;
    case SlotKind::kSize: return r.half_extent;
    case SlotKind::kAngularVelocity: return r.angular_velocity;
    case SlotKind::kLinearVelocity:
      if (slot.component == 2) return r.velocity_z;
      return {-r.max_speed, r.max_speed};
    case SlotKind::kOrientation: return {-1.0, 1.0};
    case SlotKind::kPosition: {
      if (slot.component == 0) return r.position_x;
      if (slot.component == 1) return r.position_y;
      const double extent =
          std::max({r.radius.max, r.half_extent.max * std::sqrt(3.0),
                    std::hypot(r.radius.max, r.cylinder_height.max / 2.0)});
      return {0.0, r.clearance.max + extent};
    }
    case SlotKind::kSlideFriction: return r.slide_friction;
    case SlotKind::kRollFriction: return r.roll_friction;
    case SlotKind::kMass: return r.mass;
    case SlotKind::kDamping: return r.damping;
    case SlotKind::kCameraHeight: return r.camera_height;
    case SlotKind::kCameraPitch: return r.pitch;
    case SlotKind::kCameraFovy: return r.fovy;
    case SlotKind::kGravityZ: return r.gravity_z;
  }
  return {0.0, 1.0};
}

const char* SlotCategory(SlotKind kind) {
  switch (kind) {
    case SlotKind::kRadius:
    case SlotKind::kHeight:
    case SlotKind::kSize: return "geometry";
    case SlotKind::kAngularVelocity: return "angular_velocity";
    case SlotKind::kLinearVelocity: return "linear_velocity";
    case SlotKind::kOrientation: return "orientation";
    case SlotKind::kPosition: return "position";
    case SlotKind::kSlideFriction:
    case SlotKind::kRollFriction: return "friction";
    case SlotKind::kMass: return "mass";
    case SlotKind::kDamping: return "damping";
    case SlotKind::kCameraHeight:
    case SlotKind::kCameraPitch:
    case SlotKind::kCameraFovy: return "camera";
    case SlotKind::kGravityZ: return "gravity";
  }
  return "";
}

}  // namespace

double Fitness(const EvalReport& report) {
  if (report.failed) return kNegInf;
  return report.iou_full_sequence - report.epe_full_sequence;
}

double Fitness(const SceneConfig& config, const ReferenceArtifacts& ref,
               const EvalOptions& options) {
  return Fitness(Evaluate(config, ref, nullptr, options));
}

int ArgmaxFitness(const std::vector<double>& fitness) {
  int best = 0;
  for (size_t i = 1; i < fitness.size(); ++i) {
    if (fitness[i] > fitness[best]) best = static_cast<int>(i);
  }
  return best;
}

BestOfKResult BestOfK(const std::vector<std::string>& candidate_texts,
                      const ReferenceArtifacts& ref, const EvalOptions& options,
                      double tau) {
  if (candidate_texts.empty()) throw DomainError("best-of-K needs at least one candidate");
  const int k = static_cast<int>(candidate_texts.size());
  std::vector<EvalReport> reports(k);
  ParallelFor(k, [&](int i) { reports[i] = EvaluateText(candidate_texts[i], ref, nullptr, options); });

  BestOfKResult result;
  std::vector<double> fitness(k), raw(k);
  for (int i = 0; i < k; ++i) {
    CandidateScore s;
    s.index = i;
    s.iou_full = reports[i].iou_full_sequence;
    s.epe_full = reports[i].epe_full_sequence;
    s.fitness = Fitness(reports[i]);
    s.valid = !reports[i].failed;
    fitness[i] = s.fitness;
    raw[i] = s.iou_full - s.epe_full;
    result.mean_iou += s.iou_full / k;
    result.mean_epe += s.epe_full / k;
    result.mean_fitness += raw[i] / k;
    result.scores.push_back(s);
  }
  if (tau > 0.0 && k >= 2) {
    const std::vector<double> w = SoftPreferenceWeights(raw, tau);
    for (int i = 0; i < k; ++i) result.scores[i].soft_weight = w[i];
  }
  result.best_index = ArgmaxFitness(fitness);
  const CandidateScore& best = result.scores[result.best_index];
  result.best_iou = best.iou_full;
  result.best_epe = best.epe_full;
  result.best_fitness = best.fitness;
  return result;
}

std::vector<double> SoftPreferenceWeights(const std::vector<double>& scores, double tau) {
  if (!(tau > 0.0)) throw DomainError("temperature must be positive");
  if (scores.size() < 2) throw DomainError("soft preference needs at least two scores");
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp((scores[i] - top) / tau);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

double ProLoss(const std::vector<double>& rewards, const std::vector<double>& weights) {
  if (rewards.size() != weights.size()) throw DomainError("rewards and weights differ in size");
  if (rewards.size() < 2) throw DomainError("PRO loss needs at least two candidates");
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > 1e-6) throw DomainError("weights must sum to 1");
  const double top = *std::max_element(rewards.begin(), rewards.end());
  double sum = 0.0;
  for (double r : rewards) sum += std::exp(r - top);
  const double log_norm = top + std::log(sum);
  double loss = 0.0;
  for (size_t i = 0; i < rewards.size(); ++i) loss -= weights[i] * (rewards[i] - log_norm);
  return loss;
}

double Normalization::ToUnit(int slot, double value) const {
  return (value - lo[slot]) / (hi[slot] - lo[slot]);
}

double Normalization::FromUnit(int slot, double unit) const {
  return lo[slot] + unit * (hi[slot] - lo[slot]);
}

Normalization NormalizationFor(const ParamVector& params, const SamplingRanges& ranges) {
  Normalization norm;
  for (size_t i = 0; i < params.layout.slots.size(); ++i) {
    Range r = SlotRange(params.layout.slots[i], ranges);
    r.min = std::min(r.min, params.values[i]);
    r.max = std::max(r.max, params.values[i]);
    if (!(r.max > r.min)) r.max = r.min + 1.0;
    norm.lo.push_back(r.min);
    norm.hi.push_back(r.max);
  }
  return norm;
}

std::vector<bool> FreezeMask(const ParamLayout& layout,
                             const std::vector<std::string>& categories) {
  static const std::vector<std::string> known = {
      "geometry", "position", "orientation", "linear_velocity", "angular_velocity",
      "friction", "mass",     "damping",     "camera",          "gravity"};
  for (const std::string& c : categories) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      throw DomainError("unknown parameter category '" + c + "'");
    }
  }
  std::vector<bool> mask(layout.slots.size(), false);
  for (size_t i = 0; i < layout.slots.size(); ++i) {
    const std::string cat = SlotCategory(layout.slots[i].kind);
    mask[i] = std::find(categories.begin(), categories.end(), cat) != categories.end();
  }
  return mask;
}

SearchResult CmaesSearch(const SceneConfig& init, const ReferenceArtifacts& ref,
                         const SearchOptions& options) {
  const auto violations = Validate(init);
  if (!violations.empty()) {
    throw ConfigError("initial config invalid: " + violations.front().path + ": " +
                      violations.front().rule);
  }
  if (options.generations < 0) throw DomainError("generations must be non-negative");
  const ParamVector base = FlattenParameters(init);
  const int slots = static_cast<int>(base.values.size());
  std::vector<bool> frozen = options.frozen;
  if (frozen.empty()) frozen.assign(slots, false);
  if (static_cast<int>(frozen.size()) != slots) {
    throw DomainError("frozen mask has " + std::to_string(frozen.size()) + " entries, expected " +
                      std::to_string(slots));
  }
  std::vector<int> free_slots;
  for (int i = 0; i < slots; ++i) {
    if (!frozen[i]) free_slots.push_back(i);
  }
  const Normalization norm = NormalizationFor(base, options.ranges);

  SearchResult result;
  result.best = init;
  result.best_report = Evaluate(init, ref, nullptr, options.eval);
  result.best_fitness = Fitness(result.best_report);
  result.initial_fitness = result.best_fitness;
  auto emit = [&](const GenerationRecord& rec) {
    result.log.push_back(rec);
    if (options.on_generation) options.on_generation(rec);
  };
  emit({0, result.best_fitness, result.best_fitness, options.sigma0});
  if (free_slots.empty() || options.generations == 0) return result;

  Eigen::VectorXd x0(free_slots.size());
  for (size_t j = 0; j < free_slots.size(); ++j) {
    x0[j] = std::clamp(norm.ToUnit(free_slots[j], base.values[free_slots[j]]), 0.0, 1.0);
  }
  Cmaes es(x0, options.sigma0, options.population, options.seed);
  result.min_covariance_eigenvalue = es.min_eigenvalue();

  for (int gen = 1; gen <= options.generations; ++gen) {
    const std::vector<Eigen::VectorXd> population = es.Ask();
    const int lambda = static_cast<int>(population.size());
    std::vector<SceneConfig> configs(lambda);
    std::vector<EvalReport> reports(lambda);
    std::vector<double> fitness(lambda, kNegInf);
    ParallelFor(lambda, [&](int i) {
      ParamVector candidate = base;
      for (size_t j = 0; j < free_slots.size(); ++j) {
        const int slot = free_slots[j];
        candidate.values[slot] = norm.FromUnit(slot, std::clamp(population[i][j], 0.0, 1.0));
      }
      try {
        configs[i] = UnflattenParameters(candidate);
        reports[i] = Evaluate(configs[i], ref, nullptr, options.eval);
        fitness[i] = Fitness(reports[i]);
      } catch (const Error&) {
        fitness[i] = kNegInf;
      }
    });

    double sum = 0.0;
    int finite = 0;
    for (int i = 0; i < lambda; ++i) {
      if (std::isfinite(fitness[i])) {
        sum += fitness[i];
        ++finite;
      }
      if (fitness[i] > result.best_fitness) {
        result.best_fitness = fitness[i];
        result.best = configs[i];
        result.best_report = reports[i];
      }
    }
    es.Tell(population, fitness);
    result.min_covariance_eigenvalue =
        std::min(result.min_covariance_eigenvalue, es.min_eigenvalue());
    emit({gen, result.best_fitness, finite ? sum / finite : kNegInf, es.sigma()});
  }
  return result;
}

std::string FormatGenerationLog(const std::vector<GenerationRecord>& log) {
  std::string out;
  for (const GenerationRecord& r : log) {
    nlohmann::ordered_json j;
    j["generation"] = r.generation;
    j["best_fitness"] = std::isfinite(r.best_fitness) ? nlohmann::ordered_json(r.best_fitness)
                                                      : nlohmann::ordered_json(nullptr);
    j["mean_fitness"] = std::isfinite(r.mean_fitness) ? nlohmann::ordered_json(r.mean_fitness)
                                                      : nlohmann::ordered_json(nullptr);
    j["sigma"] = r.sigma;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace dynscene

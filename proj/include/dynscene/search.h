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

#ifndef DYNSCENE_SEARCH_H_
#define DYNSCENE_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynscene/datagen.h"
#include "dynscene/metrics.h"
#include "dynscene/param_vector.h"

namespace dynscene {

// IoU minus EPE over the full sequence; -infinity for a failed evaluation.
double Fitness(const EvalReport& report);
double Fitness(const SceneConfig& config, const ReferenceArtifacts& ref,
               const EvalOptions& options = {});

struct CandidateScore {
  int index = 0;
  double iou_full = 0.0;
  double epe_full = 0.0;
  double fitness = 0.0;
  std::optional<double> soft_weight;
  bool valid = false;
};

// Index of the largest value; the lowest index wins ties.
int ArgmaxFitness(const std::vector<double>& fitness);

struct BestOfKResult {
  int best_index = 0;
  std::vector<CandidateScore> scores;
  // Averages over all candidates (failed ones contribute their worst-case
  // IoU and EPE).
  double mean_iou = 0.0;
  double mean_epe = 0.0;
  double mean_fitness = 0.0;
  // Scores of the selected candidate.
  double best_iou = 0.0;
  double best_epe = 0.0;
  double best_fitness = 0.0;
};

// Parses and scores every candidate text and selects the best one. When
// tau > 0 each score also carries its soft preference weight.
BestOfKResult BestOfK(const std::vector<std::string>& candidate_texts,
                      const ReferenceArtifacts& ref, const EvalOptions& options = {},
                      double tau = 0.0);

// Softmax of scores / tau. Throws DomainError for tau <= 0 or fewer than two
// scores.
std::vector<double> SoftPreferenceWeights(const std::vector<double>& scores, double tau);

// -sum_i w_i log softmax(r)_i. Throws DomainError when sizes differ, fewer
// than two entries are given or the weights do not sum to 1 within 1e-6.
double ProLoss(const std::vector<double>& rewards, const std::vector<double>& weights);

// Per-slot box used to map parameters to [0, 1].
struct Normalization {
  std::vector<double> lo;
  std::vector<double> hi;

  double ToUnit(int slot, double value) const;
  double FromUnit(int slot, double unit) const;
};

// Bounds from the sampling ranges, widened to contain `params`' values.
Normalization NormalizationFor(const ParamVector& params, const SamplingRanges& ranges);

// Frozen mask selecting whole slot categories: geometry, position,
// orientation, linear_velocity, angular_velocity, friction, mass, damping,
// camera, gravity. Throws DomainError for an unknown category.
std::vector<bool> FreezeMask(const ParamLayout& layout,
                             const std::vector<std::string>& categories);

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;  // best ever, including the initial config
  double mean_fitness = 0.0;  // over finite fitness values of the generation
  double sigma = 0.0;
};

struct SearchOptions {
  int population = 128;
  int generations = 100;
  uint64_t seed = 0;
  double sigma0 = 0.15;
  // One entry per slot; empty means nothing frozen.
  std::vector<bool> frozen;
  SamplingRanges ranges = DefaultSamplingRanges();
  EvalOptions eval;
  std::function<void(const GenerationRecord&)> on_generation;
};

struct SearchResult {
  SceneConfig best;
  double best_fitness = 0.0;
  double initial_fitness = 0.0;
  EvalReport best_report;
  std::vector<GenerationRecord> log;
  double min_covariance_eigenvalue = 0.0;  // smallest seen over the run
};

// CMA-ES over the normalized free slots of the initial config. Throws
// ConfigError when the initial config is invalid.
SearchResult CmaesSearch(const SceneConfig& init, const ReferenceArtifacts& ref,
                         const SearchOptions& options = {});

// One JSON object per line.
std::string FormatGenerationLog(const std::vector<GenerationRecord>& log);

}  // namespace dynscene

#endif  // DYNSCENE_SEARCH_H_

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

#include <cmath>
#include <limits>
#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "dynscene/camera.h"
#include "dynscene/cmaes.h"
#include "dynscene/errors.h"
#include "test_util.h"

namespace dynscene {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Fitness, IouMinusEpe) {
  EvalReport r;
  r.iou_full_sequence = 0.5;
  r.epe_full_sequence = 0.2;
  EXPECT_DOUBLE_EQ(Fitness(r), 0.3);
  r.failed = true;
  EXPECT_EQ(Fitness(r), -kInf);
}

TEST(Argmax, LowestIndexWinsTies) {
  EXPECT_EQ(ArgmaxFitness({0.1, 0.9, 0.4}), 1);
  EXPECT_EQ(ArgmaxFitness({0.5, 0.9, 0.9}), 1);
  EXPECT_EQ(ArgmaxFitness({-kInf, -kInf}), 0);
}

TEST(SoftPreference, ClosedForms) {
  const auto w = SoftPreferenceWeights({1.0, 0.0}, 1.0);
  EXPECT_NEAR(w[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(w[0], 0.7311, 1e-4);
  EXPECT_NEAR(w[1], 0.2689, 1e-4);
  for (double tau : {0.01, 1.0, 50.0}) {
    const auto eq = SoftPreferenceWeights({0.4, 0.4}, tau);
    EXPECT_DOUBLE_EQ(eq[0], 0.5);
  }
  const auto sharp = SoftPreferenceWeights({0.3, 0.7, 0.1}, 1e-6);
  EXPECT_NEAR(sharp[1], 1.0, 1e-6);
  EXPECT_THROW(SoftPreferenceWeights({1, 0}, 0.0), DomainError);
  EXPECT_THROW(SoftPreferenceWeights({1}, 1.0), DomainError);
}

TEST(SoftPreference, ShiftInvariantAndMonotone) {
  const std::vector<double> s = {0.2, -0.4, 0.9, 0.0};
  const auto base = SoftPreferenceWeights(s, 0.7);
  std::vector<double> shifted = s;
  for (double& v : shifted) v += 123.0;
  const auto w = SoftPreferenceWeights(shifted, 0.7);
  double sum = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(w[i], base[i], 1e-12);
    sum += w[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  std::vector<double> raised = s;
  raised[1] += 0.5;
  EXPECT_GT(SoftPreferenceWeights(raised, 0.7)[1], base[1]);
  // Large scores stay finite.
  const auto big = SoftPreferenceWeights({1000.0, 999.0}, 0.01);
  EXPECT_TRUE(std::isfinite(big[0]) && std::isfinite(big[1]));
}

TEST(ProLoss, ClosedForms) {
  EXPECT_NEAR(ProLoss({0, 0}, {0.5, 0.5}), std::log(2.0), 1e-9);
  const std::vector<double> r = {0.3, -1.2};
  const double one_hot = -std::log(std::exp(0.3) / (std::exp(0.3) + std::exp(-1.2)));
  EXPECT_NEAR(ProLoss(r, {1.0, 0.0}), one_hot, 1e-12);
  // -(w1 log s1 + w2 log s2) with s = softmax(1, 0).
  const double s1 = std::exp(1.0) / (std::exp(1.0) + 1.0);
  const double expected = -(0.7311 * std::log(s1) + 0.2689 * std::log(1.0 - s1));
  EXPECT_NEAR(ProLoss({1, 0}, {0.7311, 0.2689}), expected, 1e-12);
  EXPECT_NEAR(ProLoss({1, 0}, {0.7311, 0.2689}), 0.58216, 1e-5);
  EXPECT_GE(ProLoss({5, -5}, {1, 0}), 0.0);
  EXPECT_LT(ProLoss({40, -40}, {1, 0}), 1e-30);
  EXPECT_THROW(ProLoss({1, 0}, {0.6, 0.6}), DomainError);
  EXPECT_THROW(ProLoss({1, 0, 2}, {0.5, 0.5}), DomainError);
}

TEST(Cmaes, DefaultWeightsAndDecomposition) {
  Cmaes es(Eigen::VectorXd::Constant(5, 0.5), 0.3, 12, 1);
  EXPECT_EQ(es.mu(), 6);
  EXPECT_NEAR(es.weights().sum(), 1.0, 1e-12);
  for (int i = 1; i < es.mu(); ++i) EXPECT_LT(es.weights()[i], es.weights()[i - 1]);
  EXPECT_NEAR(es.mu_eff(), 1.0 / es.weights().squaredNorm(), 1e-12);
}

TEST(Cmaes, MinimizesSphereAndKeepsCovariancePd) {
  Cmaes es(Eigen::VectorXd::Constant(6, 3.0), 1.0, 12, 4);
  for (int g = 0; g < 200; ++g) {
    const auto pop = es.Ask();
    std::vector<double> f;
    for (const auto& x : pop) f.push_back(-x.squaredNorm());
    es.Tell(pop, f);
    const Eigen::MatrixXd& c = es.covariance();
    ASSERT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_GE(es.min_eigenvalue(), Cmaes::kEigenFloor);
    ASSERT_GT(es.sigma(), 0.0);
  }
  EXPECT_LT(es.mean().norm(), 1e-4);
  EXPECT_EQ(es.generation(), 200);
}

TEST(Cmaes, DeterministicPerSeed) {
  Cmaes a(Eigen::VectorXd::Zero(3), 0.5, 8, 77), b(Eigen::VectorXd::Zero(3), 0.5, 8, 77);
  const auto pa = a.Ask(), pb = b.Ask();
  for (size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i], pb[i]);
}

TEST(Freeze, CategoriesSelectSlots) {
  const ParamVector p = FlattenParameters(testing::AppendixConfig());
  const auto mask = FreezeMask(p.layout, {"camera", "gravity"});
  int frozen = 0;
  for (size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++frozen;
    EXPECT_EQ(p.layout.slots[i].object, -1);
  }
  EXPECT_EQ(frozen, 4);
  EXPECT_THROW(FreezeMask(p.layout, {"colour"}), DomainError);
}

TEST(Normalization, CoversInitAndRoundTrips) {
  const ParamVector p = FlattenParameters(testing::AppendixConfig());
  const Normalization n = NormalizationFor(p, DefaultSamplingRanges());
  for (size_t i = 0; i < p.values.size(); ++i) {
    const double u = n.ToUnit(i, p.values[i]);
    EXPECT_GE(u, 0.0);
    EXPECT_LE(u, 1.0);
    EXPECT_NEAR(n.FromUnit(i, u), p.values[i], 1e-12);
  }
}

class SearchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    truth_ = testing::SceneWith({testing::Sphere("ball", 0.3, {0.0, 1.5, 0.3})});
    ref_ = ReferenceArtifacts::FromRender(
        RenderScene(Simulate(truth_), BuildCamera(truth_.camera, 160, 120)));
  }
  SceneConfig truth_;
  ReferenceArtifacts ref_;
};

TEST_F(SearchTest, TruthNeverLosesFitness) {
  SearchOptions o;
  o.population = 6;
  o.generations = 3;
  o.seed = 3;
  const SearchResult r = CmaesSearch(truth_, ref_, o);
  EXPECT_DOUBLE_EQ(r.initial_fitness, 1.0);
  EXPECT_DOUBLE_EQ(r.best_fitness, 1.0);
  ASSERT_EQ(r.log.size(), 4u);
  for (size_t g = 1; g < r.log.size(); ++g) {
    EXPECT_GE(r.log[g].best_fitness, r.log[g - 1].best_fitness);
  }
  EXPECT_GE(r.min_covariance_eigenvalue, Cmaes::kEigenFloor);
}

TEST_F(SearchTest, DeterministicAndShapePreserving) {
  SceneConfig init = truth_;
  init.objects[0].state.position.x() += 0.3;
  SearchOptions o;
  o.population = 6;
  o.generations = 3;
  o.seed = 11;
  const SearchResult a = CmaesSearch(init, ref_, o);
  const SearchResult b = CmaesSearch(init, ref_, o);
  EXPECT_EQ(a.best_fitness, b.best_fitness);
  EXPECT_EQ(SerializeConfig(a.best), SerializeConfig(b.best));
  ASSERT_EQ(a.best.objects.size(), 1u);
  EXPECT_EQ(a.best.objects[0].shape, Shape::kSphere);
  EXPECT_EQ(a.best.objects[0].name, "ball");
  EXPECT_GE(a.best_fitness, a.initial_fitness);
  const std::string log = FormatGenerationLog(a.log);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 4);
}

TEST_F(SearchTest, FrozenSlotsStayPut) {
  SceneConfig init = truth_;
  init.objects[0].state.position.x() += 0.3;
  const ParamVector p = FlattenParameters(init);
  SearchOptions o;
  o.population = 6;
  o.generations = 2;
  o.frozen = FreezeMask(p.layout, {"geometry", "orientation", "linear_velocity",
                                   "angular_velocity", "friction", "mass", "damping",
                                   "camera", "gravity"});
  const SearchResult r = CmaesSearch(init, ref_, o);
  const ParamVector q = FlattenParameters(r.best);
  for (size_t i = 0; i < p.values.size(); ++i) {
    if (o.frozen[i]) EXPECT_EQ(q.values[i], p.values[i]) << p.layout.slots[i].path;
  }
}

TEST_F(SearchTest, InvalidInitThrows) {
  SceneConfig bad = truth_;
  bad.objects[0].physics.mass = -1.0;
  EXPECT_THROW(CmaesSearch(bad, ref_), ConfigError);
}

TEST_F(SearchTest, BestOfKPicksArgmax) {
  std::vector<std::string> texts;
  std::vector<double> offsets = {0.6, 0.0, 0.3, 1.0};
  for (double dx : offsets) {
    SceneConfig c = truth_;
    c.objects[0].state.position.x() += dx;
    texts.push_back(FormatTarget(std::nullopt, SerializeConfig(c)));
  }
  texts.push_back("garbage without tags");
  const BestOfKResult r = BestOfK(texts, ref_, {}, 1.0);
  EXPECT_EQ(r.best_index, 1);
  EXPECT_DOUBLE_EQ(r.best_fitness, 1.0);
  EXPECT_FALSE(r.scores[4].valid);
  EXPECT_EQ(r.scores[4].fitness, -kInf);
  for (const auto& s : r.scores) EXPECT_GE(r.best_fitness, s.fitness);
  double mean = 0.0, wsum = 0.0;
  for (const auto& s : r.scores) {
    mean += (s.iou_full - s.epe_full) / r.scores.size();
    ASSERT_TRUE(s.soft_weight.has_value());
    wsum += *s.soft_weight;
  }
  EXPECT_NEAR(r.mean_fitness, mean, 1e-12);
  EXPECT_NEAR(wsum, 1.0, 1e-12);

  const BestOfKResult junk = BestOfK({"x", "y"}, ref_);
  EXPECT_EQ(junk.best_index, 0);
  EXPECT_EQ(junk.best_iou, 0.0);
}

}  // namespace
}  // namespace dynscene

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

#include "dynscene/datagen.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dynscene/collision.h"
#include "dynscene/errors.h"
#include "test_util.h"

namespace dynscene {
namespace {

namespace fs = std::filesystem;

bool Inside(double v, const Range& r, double slack = 1e-5) {
  return v >= r.min - slack && v <= r.max + slack;
}

TEST(Sampling, DeterministicPerSeed) {
  const SamplingRanges& r = DefaultSamplingRanges();
  for (uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
    EXPECT_EQ(SerializeConfig(SampleConfig(r, seed)), SerializeConfig(SampleConfig(r, seed)));
  }
  EXPECT_NE(SerializeConfig(SampleConfig(r, 1)), SerializeConfig(SampleConfig(r, 2)));
}

TEST(Sampling, ValuesStayInRanges) {
  const SamplingRanges& r = DefaultSamplingRanges();
  for (uint64_t seed = 0; seed < 300; ++seed) {
    const SceneConfig c = SampleConfig(r, seed);
    ASSERT_TRUE(Validate(c).empty());
    ASSERT_GE(c.objects.size(), 1u);
    ASSERT_LE(c.objects.size(), 4u);
    EXPECT_TRUE(Inside(c.camera.height(), r.camera_height));
    EXPECT_TRUE(Inside(c.camera.pitch_deg, r.pitch));
    EXPECT_TRUE(Inside(c.camera.fovy_deg, r.fovy));
    EXPECT_TRUE(Inside(c.gravity.vector.z(), r.gravity_z));
    for (const ObjectSpec& o : c.objects) {
      if (o.shape == Shape::kBox) {
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(Inside(o.size[i], r.half_extent));
      } else {
        EXPECT_TRUE(Inside(o.radius, r.radius));
      }
      if (o.shape == Shape::kCylinder) EXPECT_TRUE(Inside(o.height, r.cylinder_height));
      EXPECT_TRUE(Inside(o.state.position.x(), r.position_x));
      EXPECT_TRUE(Inside(o.state.position.y(), r.position_y));
      const Pose pose = Pose::From(o.state.position, o.state.orientation);
      EXPECT_TRUE(Inside(GroundClearance(ConvexShape::FromSpec(o), pose), r.clearance));
      EXPECT_LE(o.state.linear_velocity.head<2>().norm(), r.max_speed + 1e-5);
      EXPECT_TRUE(Inside(o.state.linear_velocity.z(), r.velocity_z));
      for (int i = 0; i < 3; ++i) {
        EXPECT_TRUE(Inside(o.state.angular_velocity[i], r.angular_velocity));
      }
      EXPECT_TRUE(Inside(o.physics.mass, r.mass));
      EXPECT_TRUE(Inside(o.physics.slide_friction, r.slide_friction));
      EXPECT_TRUE(Inside(o.physics.roll_friction, r.roll_friction));
      EXPECT_TRUE(Inside(o.physics.damping, r.damping));
    }
  }
}

TEST(Sampling, HeldOutCombinationsNeverAppear) {
  const SamplingRanges& r = DefaultSamplingRanges();
  ASSERT_EQ(r.held_out.size(), 4u);
  int four_object = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const SceneConfig c = SampleConfig(r, DeriveSeed(5, seed));
    const std::vector<Shape> combo = ShapeCombination(c);
    four_object += combo.size() == 4;
    EXPECT_TRUE(std::find(r.held_out.begin(), r.held_out.end(), combo) == r.held_out.end());
  }
  EXPECT_GT(four_object, 150);
}

TEST(Sampling, CombinationIsSorted) {
  SceneConfig c = testing::SceneWith({testing::Sphere("s", 0.2, {0, 0, 1}),
                                      testing::Box("b", {0.2, 0.2, 0.2}, {1, 0, 1})});
  const auto combo = ShapeCombination(c);
  EXPECT_TRUE(std::is_sorted(combo.begin(), combo.end()));
}

TEST(Sampling, SeedDerivationIsIndexLocal) {
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
  EXPECT_NE(DeriveSeed(7, 3), DeriveSeed(7, 4));
  EXPECT_NE(DeriveSeed(7, 3), DeriveSeed(8, 3));
}

TEST(Ranges, ParseAndReject) {
  const SamplingRanges& d = DefaultSamplingRanges();
  EXPECT_EQ(d.radius.min, 0.1);
  EXPECT_EQ(d.gravity_z.max, -4.0);
  EXPECT_THROW(ParseSamplingRanges("geometry: {radius: [0.5, 0.1]}\n"), DomainError);
  EXPECT_THROW(ParseSamplingRanges("geometry: {radius: [0.5]}\n"), SchemaError);
  EXPECT_THROW(ParseSamplingRanges("colour: 3\n"), SchemaError);
  const SamplingRanges p = ParseSamplingRanges("geometry: {radius: [0.2, 0.3]}\nholdout: false\n");
  EXPECT_EQ(p.radius.max, 0.3);
  EXPECT_FALSE(p.holdout);
}

Visibility Vis(std::vector<int> max_counts) {
  Visibility v;
  for (int m : max_counts) v.counts.push_back({m});
  v.max_count = std::move(max_counts);
  return v;
}

TEST(Filters, Rules) {
  using testing::SceneWith;
  using testing::Sphere;
  const SceneConfig apart = SceneWith({Sphere("a", 0.3, {-1, 1, 0.3}), Sphere("b", 0.3, {1, 1, 0.3}),
                                       Sphere("c", 0.3, {3, 1, 0.3})});
  const SceneConfig overlap = SceneWith({Sphere("a", 0.3, {0, 1, 0.3}), Sphere("b", 0.3, {0.2, 1, 0.3})});
  EXPECT_EQ(FilterScene(overlap, Vis({9000, 9000})).reason, "overlap");
  EXPECT_TRUE(FilterScene(apart, Vis({9000, 0, 9000})).accepted);
  EXPECT_EQ(FilterScene(apart, Vis({9000, 0, 0})).reason, "out_of_view");
  EXPECT_EQ(FilterScene(apart, Vis({9000, 7999, 9000})).reason, "too_small");
  EXPECT_TRUE(FilterScene(apart, Vis({9000, 8000, 9000})).accepted);
}

TEST(BuildScene, OverlapShortCircuits) {
  using testing::Sphere;
  const SceneArtifacts s = BuildScene(testing::SceneWith(
      {Sphere("a", 0.3, {0, 1, 0.3}), Sphere("b", 0.3, {0.2, 1, 0.3})}));
  EXPECT_FALSE(s.filter.accepted);
  EXPECT_EQ(s.filter.reason, "overlap");
  EXPECT_TRUE(s.trace.frames.empty());
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Dataset, GenerateValidateAndDetectTampering) {
  const auto dir = testing::MakeTempDir("dataset");
  const Manifest m = GenerateDataset(2, DefaultSamplingRanges(), dir.string(), 21);
  EXPECT_EQ(m.accepted, 2);
  int accepted = 0, rejected = 0;
  for (const DatasetRecord& r : m.records) {
    (r.accepted ? accepted : rejected)++;
    if (!r.accepted) continue;
    EXPECT_EQ(r.mask_paths.size(), 31u);
    EXPECT_EQ(r.flow_paths.size(), 10u);
    EXPECT_TRUE(fs::exists(dir / r.config_path));
    EXPECT_TRUE(fs::exists(dir / r.events_path));
    EXPECT_TRUE(fs::exists(dir / r.description_path));
    const AnswerParts t = ExtractAnswer(testing::ReadFileText((dir / r.target_path).string()));
    EXPECT_TRUE(t.reasoning.has_value());
    EXPECT_NO_THROW(ParseConfig(t.config_text));
    // Seed isolation: a record depends only on its own derived seed.
    const SceneArtifacts again = BuildScene(SampleConfig(DefaultSamplingRanges(), r.seed));
    EXPECT_TRUE(again.filter.accepted);
  }
  int counted = 0;
  for (const auto& [reason, n] : m.rejections) counted += n;
  EXPECT_EQ(counted, rejected);
  EXPECT_EQ(accepted, 2);
  EXPECT_EQ(m.content_hash.size(), 64u);

  EXPECT_TRUE(ValidateDataset(dir.string(), true).empty());

  const fs::path mask = dir / m.records.back().mask_paths[5];
  {
    std::fstream f(mask, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('\x07');
  }
  EXPECT_FALSE(ValidateDataset(dir.string(), false).empty());
  fs::remove(dir / m.records.back().config_path);
  EXPECT_FALSE(ValidateDataset(dir.string(), false).empty());
  EXPECT_FALSE(ValidateDataset((dir / "nothing").string()).empty());
}

}  // namespace
}  // namespace dynscene

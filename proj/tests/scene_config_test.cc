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

#include "dynscene/scene_config.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "dynscene/errors.h"
#include "test_util.h"

namespace dynscene {
namespace {

using testing::AppendixConfig;
using testing::RandomConfig;

TEST(SceneConfigParse, AppendixExample) {
  const SceneConfig c = AppendixConfig();
  ASSERT_EQ(c.objects.size(), 2u);
  EXPECT_EQ(c.objects[0].name, "box_0");
  EXPECT_EQ(c.objects[0].shape, Shape::kBox);
  EXPECT_EQ(c.objects[1].name, "cylinder_0");
  EXPECT_EQ(c.objects[1].shape, Shape::kCylinder);
  EXPECT_DOUBLE_EQ(c.objects[0].physics.slide_friction, 1.1);
  EXPECT_DOUBLE_EQ(c.objects[0].physics.roll_friction, 0.3);
  EXPECT_DOUBLE_EQ(c.objects[1].radius, 0.3);
  EXPECT_DOUBLE_EQ(c.objects[1].height, 0.5);
  EXPECT_DOUBLE_EQ(c.camera.fovy_deg, 45.0);
  EXPECT_DOUBLE_EQ(c.camera.pitch_deg, 45.0);
  EXPECT_DOUBLE_EQ(c.camera.height(), 3.5);
  EXPECT_DOUBLE_EQ(c.gravity.vector.z(), -7.0);
  EXPECT_NEAR(c.objects[0].state.orientation.norm(), 1.0, 1e-12);
  EXPECT_EQ(c.IndexOf("cylinder_0"), 1);
  EXPECT_EQ(c.Find("nope"), nullptr);
}

TEST(SceneConfigParse, RejectsWrongArity) {
  std::string text = testing::ReadFileText(testing::TestDataPath("appendix_example.yaml"));
  const auto pos = text.find("size: [1.0, 0.5, 0.4]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 21, "size: [1.0, 0.5]");
  EXPECT_THROW(ParseConfig(text), SchemaError);
}

TEST(SceneConfigParse, RejectsUnknownKey) {
  std::string text = testing::ReadFileText(testing::TestDataPath("appendix_example.yaml"));
  text += "  colour: 3\n";
  EXPECT_THROW(ParseConfig(text), SchemaError);
}

TEST(SceneConfigParse, RejectsMalformedYaml) {
  EXPECT_THROW(ParseConfig("- type: sphere\n  radius: [1, 2\n"), SyntaxError);
}

TEST(SceneConfigParse, RejectsUnknownType) {
  EXPECT_THROW(ParseConfig("- type: torus\n  name: t\n"), SchemaError);
}

TEST(SceneConfigParse, NegativeMassIsDomainError) {
  SceneConfig c = AppendixConfig();
  c.objects[0].physics.mass = -1.0;
  EXPECT_THROW(ParseConfig(SerializeConfig(c)), DomainError);
}

TEST(SceneConfigParse, MissingCameraIsSchemaError) {
  SceneConfig c = AppendixConfig();
  std::string text = SerializeConfig(c);
  text = text.substr(0, text.find("- type: camera"));
  text += "- type: gravity\n  gravity: [0, 0, -9]\n";
  EXPECT_THROW(ParseConfig(text), SchemaError);
}

TEST(SceneConfigRoundTrip, RandomConfigsSurvive) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const SceneConfig c = RandomConfig(rng);
    ASSERT_TRUE(Validate(c).empty()) << "trial " << trial;
    const SceneConfig back = ParseConfig(SerializeConfig(c));
    EXPECT_TRUE(ApproxEqual(c, back, 1e-6, 5e-6)) << "trial " << trial;
  }
}

TEST(SceneConfigRoundTrip, CanonicalFormIsFixedPoint) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const SceneConfig canon = Canonicalize(RandomConfig(rng));
    const std::string text = SerializeConfig(canon);
    const SceneConfig again = ParseConfig(text);
    EXPECT_EQ(SerializeConfig(again), text);
    EXPECT_TRUE(again == canon) << "trial " << trial;
  }
}

TEST(SceneConfigRoundTrip, NegativeZeroPrintsAsZero) {
  SceneConfig a = AppendixConfig();
  SceneConfig b = a;
  a.objects[0].state.angular_velocity = {-0.0, 0.0, -0.0};
  b.objects[0].state.angular_velocity = {0.0, 0.0, 0.0};
  EXPECT_EQ(SerializeConfig(a), SerializeConfig(b));
}

TEST(SceneConfigRoundTrip, NearUnitQuaternionIsNormalized) {
  for (double scale : {1.0 + 1e-7, 1.0 - 1e-7}) {
    SceneConfig c = AppendixConfig();
    const Eigen::Vector4d raw(0.5 * scale, 0.5 * scale, 0.5 * scale, 0.5 * scale);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "[%.9f, %.9f, %.9f, %.9f]", raw[0], raw[1], raw[2], raw[3]);
    std::string text = SerializeConfig(c);
    const std::string key = "orientation: [";
    const auto pos = text.find(key);
    const auto end = text.find(']', pos);
    text.replace(pos + key.size() - 1, end - (pos + key.size() - 1) + 1, buf);
    const SceneConfig parsed = ParseConfig(text);
    const auto& q = parsed.objects[0].state.orientation;
    EXPECT_NEAR(q.w(), 0.5, 1e-12);
    EXPECT_NEAR(q.x(), 0.5, 1e-12);
    EXPECT_NEAR(q.norm(), 1.0, 1e-12);
  }
}

TEST(SceneConfigRoundTrip, NonUnitQuaternionIsNormalizedZeroRejected) {
  const std::string base = SerializeConfig(AppendixConfig());
  const std::string key = "orientation: [";
  const auto pos = base.find(key);
  const auto end = base.find(']', pos);
  std::string text = base;
  text.replace(pos, end - pos + 1, "orientation: [2, 0, 0, 0]");
  const SceneConfig parsed = ParseConfig(text);
  EXPECT_NEAR(parsed.objects[0].state.orientation.w(), 1.0, 1e-15);
  text = base;
  text.replace(pos, end - pos + 1, "orientation: [0, 0, 0, 0]");
  EXPECT_THROW(ParseConfig(text), DomainError);
}

TEST(ExtractAnswer, AnswerOnly) {
  const AnswerParts p = ExtractAnswer("<answer>- type: sphere</answer>");
  EXPECT_FALSE(p.reasoning.has_value());
  EXPECT_EQ(p.config_text, "- type: sphere");
}

TEST(ExtractAnswer, ThinkThenAnswer) {
  const AnswerParts p =
      ExtractAnswer("preamble <think>count the balls</think>\n<answer>body</answer> tail");
  ASSERT_TRUE(p.reasoning.has_value());
  EXPECT_EQ(*p.reasoning, "count the balls");
  EXPECT_EQ(p.config_text, "body");
}

TEST(ExtractAnswer, UnbalancedTagsThrow) {
  EXPECT_THROW(ExtractAnswer("<answer>body"), TagError);
  EXPECT_THROW(ExtractAnswer("body</answer>"), TagError);
  EXPECT_THROW(ExtractAnswer("<think>a<answer>b</think></answer>"), TagError);
  EXPECT_THROW(ExtractAnswer("no tags at all"), TagError);
}

TEST(ExtractAnswer, FormatTargetRoundTrips) {
  const std::string body = SerializeConfig(AppendixConfig());
  for (const std::optional<std::string>& why :
       {std::optional<std::string>(), std::optional<std::string>("two objects")}) {
    const AnswerParts p = ExtractAnswer(FormatTarget(why, body));
    EXPECT_EQ(p.reasoning, why);
    EXPECT_TRUE(ParseConfig(p.config_text) == ParseConfig(body));
  }
}

TEST(Discretize, XBinsAndBoundaries) {
  struct Case {
    double x;
    const char* label;
  };
  const Case cases[] = {
      {-3.0, "far left"},         {-2.0, "moderately left"}, {-1.5, "moderately left"},
      {-1.0, "slightly left"},    {-0.7, "slightly left"},   {-0.5, "near center"},
      {0.0, "near center"},       {0.49, "near center"},     {0.5, "slightly right"},
      {0.99, "slightly right"},   {1.0, "moderately right"}, {1.99, "moderately right"},
      {2.0, "far right"},         {40.0, "far right"},
  };
  for (const Case& c : cases) EXPECT_EQ(DiscretizeX(c.x), c.label) << c.x;
}

TEST(Discretize, XBinsPartitionTheLine) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const double edges[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  const char* labels[] = {"far left",      "moderately left",  "slightly left", "near center",
                          "slightly right", "moderately right", "far right"};
  for (int i = 0; i < 5000; ++i) {
    const double x = u(rng);
    int bin = 0;
    while (bin < 6 && x >= edges[bin]) ++bin;
    EXPECT_EQ(DiscretizeX(x), labels[bin]);
  }
}

TEST(Discretize, YAndZBins) {
  EXPECT_EQ(DiscretizeY(-3.0), "far foreground");
  EXPECT_EQ(DiscretizeY(0.0), "mid-depth");
  EXPECT_EQ(DiscretizeY(2.0), "far background");
  EXPECT_EQ(DiscretizeZ(0.3), "on the ground");
  EXPECT_EQ(DiscretizeZ(0.6), "low");
  EXPECT_EQ(DiscretizeZ(1.5), "high");
}

TEST(Validate, ReportsViolationPaths) {
  SceneConfig c = AppendixConfig();
  c.objects[0].physics.mass = 0.0;
  auto v = Validate(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path, "objects[0].physics.mass");

  c = AppendixConfig();
  c.camera.position = {1.0, -2.0, 3.0};
  v = Validate(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path, "camera.position");

  c = AppendixConfig();
  c.objects[1].name = c.objects[0].name;
  v = Validate(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path, "objects[1].name");

  c = AppendixConfig();
  c.gravity.vector = {0.0, 0.0, 1.0};
  v = Validate(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path, "gravity");
}

TEST(Validate, ObjectCountLimit) {
  SceneConfig c = AppendixConfig();
  c.objects.clear();
  EXPECT_FALSE(Validate(c).empty());
}

TEST(Fields, GetSetAndEdits) {
  const SceneConfig c = AppendixConfig();
  EXPECT_DOUBLE_EQ(GetField(c, "objects.0.state.linear_velocity.0"), 4.3);
  EXPECT_DOUBLE_EQ(GetField(c, "objects.1.physics.friction.0"), 0.5);
  EXPECT_DOUBLE_EQ(GetField(c, "camera.position.2"), 3.5);
  EXPECT_DOUBLE_EQ(GetField(c, "gravity.2"), -7.0);

  const SceneConfig edited = ApplyEdits(c, {"objects.0.state.linear_velocity.0=0.86"});
  EXPECT_DOUBLE_EQ(edited.objects[0].state.linear_velocity.x(), 0.86);
  const SceneConfig reparsed = ParseConfig(SerializeConfig(edited));
  EXPECT_DOUBLE_EQ(reparsed.objects[0].state.linear_velocity.x(), 0.86);

  EXPECT_THROW(ApplyEdits(c, {"objects.0.colour=1"}), SchemaError);
  EXPECT_THROW(ApplyEdits(c, {"objects.9.physics.mass=1"}), SchemaError);
  EXPECT_THROW(ApplyEdits(c, {"objects.0.physics.mass"}), SchemaError);
  EXPECT_THROW(ApplyEdits(c, {"objects.0.physics.mass=abc"}), SchemaError);
  EXPECT_THROW(ApplyEdits(c, {"objects.0.physics.mass=-2"}), DomainError);
}

TEST(Shapes, NamesRoundTrip) {
  for (Shape s : {Shape::kSphere, Shape::kBox, Shape::kCylinder}) {
    EXPECT_EQ(ShapeFromName(ShapeName(s)), s);
  }
  EXPECT_FALSE(ShapeFromName("cone").has_value());
}

}  // namespace
}  // namespace dynscene

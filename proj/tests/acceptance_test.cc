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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dynscene/camera.h"
#include "dynscene/cli.h"
#include "dynscene/cmaes.h"
#include "dynscene/datagen.h"
#include "dynscene/event_mining.h"
#include "dynscene/metrics.h"
#include "dynscene/renderer.h"
#include "dynscene/search.h"
#include "dynscene/simulator.h"
#include "test_util.h"

namespace dynscene {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::SceneWith;
using testing::Sphere;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects failed sub-checks of one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failures_.empty(); }
  std::string Summary() const {
    std::string s = notes_;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + ("failed: " + f);
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

int RunQuiet(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<std::string> argv = {"dynscene"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream o, e;
  const int code = RunCli(argv, o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

std::string Field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return "";
  const auto start = pos + key.size() + 1;
  return text.substr(start, text.find_first_of(" \n", start) - start);
}

void Ballistics(Check& c) {
  const auto t0 = Clock::now();
  ObjectSpec s = Sphere("ball", 0.25, {0.0, 1.0, 10.0}, {1.2, -0.4, 2.0});
  s.physics.damping = -9.0;
  const SceneConfig config = SceneWith({s}, -7.0);
  const SimTrace trace = Simulate(config);
  const double runtime = Seconds(t0);
  double worst = 0.0;
  for (const TraceFrame& f : trace.frames) {
    const Eigen::Vector3d expected = s.state.position + s.state.linear_velocity * f.time +
                                     0.5 * config.gravity.vector * f.time * f.time;
    worst = std::max(worst, (f.bodies[0].position - expected).norm());
  }
  c.Expect(trace.frames.size() == 31 && std::abs(trace.frames.back().time - 1.0) < 1e-12,
           "trace covers 1 s");
  c.Expect(trace.contacts.empty(), "contact free");
  c.Expect(worst < 1e-3, "max deviation < 1e-3 m");
  c.Expect(runtime < 1.0, "runtime < 1 s");
  c.Note("max_dev=" + Fmt("%.3g", worst) + " m runtime=" + Fmt("%.3f", runtime) + " s");
}

void ContactSanity(Check& c) {
  const SceneConfig rest = SceneWith(
      {Sphere("s", 0.3, {-1.5, 1, 0.3}), testing::Box("b", {0.4, 0.3, 0.2}, {0, 1, 0.2}),
       testing::Cylinder("c", 0.3, 0.5, {1.5, 1, 0.25})});
  const SimTrace t = Simulate(rest);
  double drift = 0.0;
  for (size_t i = 0; i < rest.objects.size(); ++i) {
    for (const TraceFrame& f : t.frames) {
      drift = std::max(drift, (f.bodies[i].position - t.frames[0].bodies[i].position).norm());
    }
  }
  c.Expect(drift < 1e-3, "resting drift < 1e-3 m");

  ObjectSpec a = Sphere("a", 0.3, {-1.0, 1, 0.3}, {2.0, 0, 0});
  ObjectSpec b = Sphere("b", 0.3, {1.0, 1, 0.3}, {-0.5, 0, 0});
  for (ObjectSpec* o : {&a, &b}) {
    o->physics.slide_friction = 0.0;
    o->physics.roll_friction = 0.0;
  }
  const SimTrace h = Simulate(SceneWith({a, b}));
  const Eigen::Vector3d p0 = a.state.linear_velocity + b.state.linear_velocity;
  double rel = 0.0;
  for (const TraceFrame& f : h.frames) {
    const Eigen::Vector3d p = f.bodies[0].linear_velocity + f.bodies[1].linear_velocity;
    rel = std::max(rel, (p - p0).head<2>().norm() / p0.norm());
  }
  bool collided = false;
  for (const ContactEvent& e : h.contacts) collided |= e.kind == ContactKind::kObjectObject;
  c.Expect(collided, "head-on collision happened");
  c.Expect(rel < 1e-6, "momentum conserved within 1e-6 relative");
  c.Note("drift=" + Fmt("%.3g", drift) + " m momentum_rel_err=" + Fmt("%.3g", rel));
}

void MetricOracles(Check& c) {
  IdMap a{8, 8, std::vector<uint8_t>(64, 0)}, b = a, d = a;
  for (int y = 0; y < 2; ++y) {
    a.ids[y * 8 + 0] = a.ids[y * 8 + 1] = 1;
    b.ids[y * 8 + 1] = b.ids[y * 8 + 2] = 1;
    d.ids[(y + 5) * 8 + 5] = 2;
  }
  c.Expect(FrameIoU(a, a) == 1.0, "IoU(a,a) = 1");
  c.Expect(FrameIoU(a, d) == 0.0, "IoU(disjoint) = 0");
  c.Expect(FrameIoU(a, b) == 2.0 / 6.0, "strip IoU = 1/3");
  FlowField z{6, 4, std::vector<float>(48, 0.0f)}, off = z;
  for (size_t i = 0; i < off.data.size(); i += 2) {
    off.data[i] = 3.0f;
    off.data[i + 1] = 4.0f;
  }
  c.Expect(FrameEpe(off, off) == 0.0, "EPE(a,a) = 0");
  c.Expect(FrameEpe(off, z) == 5.0, "constant (3,4) offset EPE = 5");
}

void SelfReconstruction(Check& c) {
  const auto t0 = Clock::now();
  int accepted = 0, attempts = 0, exact = 0;
  for (uint64_t i = 0; accepted < 20 && attempts < 400; ++i, ++attempts) {
    const SceneConfig config = SampleConfig(DefaultSamplingRanges(), DeriveSeed(2024, i));
    const SceneArtifacts scene = BuildScene(config);
    if (!scene.filter.accepted) continue;
    ++accepted;
    const ReferenceArtifacts ref = ReferenceArtifacts::FromRender(scene.render);
    const EvalReport r = Evaluate(config, ref, &config);
    exact += !r.failed && r.iou_first_frame == 1.0 && r.iou_full_sequence == 1.0 &&
             r.epe_first_frame == 0.0 && r.epe_full_sequence == 0.0;
  }
  const double runtime = Seconds(t0);
  c.Expect(accepted == 20, "20 accepted configs");
  c.Expect(exact == accepted, "IoU = 1 and EPE = 0 exactly");
  c.Expect(runtime < 120.0, "runtime < 2 min");
  c.Note("exact=" + std::to_string(exact) + "/" + std::to_string(accepted) + " attempts=" +
         std::to_string(attempts) + " runtime=" + Fmt("%.1f", runtime) + " s");
}

void FlowSchedule(Check& c) {
  const SimTrace t = Simulate(testing::AppendixConfig());
  const CameraModel cam = BuildCamera(t.config.camera);
  const size_t raw = RenderRawFlow(t, cam).size();
  const size_t sampled = RenderFlow(t, cam, 3).size();
  c.Expect(t.frames.size() == 31, "31 snapshots for 1 s at 30 FPS");
  c.Expect(raw == 29, "29 raw flow fields");
  c.Expect(sampled == 10, "10 fields after stride-3 sampling");
  c.Expect(FlowSampleFrames(31, 3) == std::vector<int>({0, 3, 6, 9, 12, 15, 18, 21, 24, 27}),
           "sample indices 0,3,...,27");
  c.Note("raw=" + std::to_string(raw) + " sampled=" + std::to_string(sampled));
}

Visibility MaxCounts(std::vector<int> max_counts) {
  Visibility v;
  for (int m : max_counts) v.counts.push_back({m});
  v.max_count = std::move(max_counts);
  return v;
}

void Filters(Check& c) {
  const SceneConfig apart = SceneWith({Sphere("a", 0.3, {-1, 1, 0.3}), Sphere("b", 0.3, {1, 1, 0.3}),
                                       Sphere("c", 0.3, {3, 1, 0.3})});
  const SceneConfig overlapping =
      SceneWith({Sphere("a", 0.3, {0, 1, 0.3}), Sphere("b", 0.3, {0.25, 1, 0.3})});
  c.Expect(FilterScene(overlapping, MaxCounts({9000, 9000})).reason == "overlap",
           "(i) overlap rejects");
  c.Expect(BuildScene(overlapping).filter.reason == "overlap", "(i) overlap rejects in pipeline");
  c.Expect(FilterScene(apart, MaxCounts({9000, 0, 9000})).accepted, "(ii) one unseen accepts");
  c.Expect(FilterScene(apart, MaxCounts({9000, 0, 0})).reason == "out_of_view",
           "(ii) two unseen rejects");
  c.Expect(FilterScene(apart, MaxCounts({9000, 7999, 9000})).reason == "too_small",
           "(iii) 7999 px rejects");
  c.Expect(FilterScene(apart, MaxCounts({9000, 8000, 9000})).accepted, "(iii) 8000 px accepts");
  // A small sphere far away renders below the pixel threshold.
  const SceneArtifacts tiny = BuildScene(SceneWith({Sphere("far", 0.1, {0, 4, 0.1})}));
  c.Expect(tiny.filter.reason == "too_small", "(iii) rendered tiny object rejects");
  c.Note("tiny_max_px=" + std::to_string(tiny.visibility.max_count.empty()
                                             ? -1
                                             : tiny.visibility.max_count[0]));
}

void Discretization(Check& c) {
  struct Case {
    double x;
    const char* label;
  };
  const Case cases[] = {{-2.5, "far left"},        {-2.0, "moderately left"},
                        {-1.2, "moderately left"}, {-0.7, "slightly left"},
                        {-0.5, "near center"},     {0.0, "near center"},
                        {0.7, "slightly right"},   {1.5, "moderately right"},
                        {2.5, "far right"}};
  int ok = 0;
  for (const Case& k : cases) {
    const bool hit = DiscretizeX(k.x) == k.label;
    ok += hit;
    c.Expect(hit, "x=" + Fmt("%g", k.x) + " -> " + k.label);
  }
  c.Note(std::to_string(ok) + "/" + std::to_string(std::size(cases)) + " cases");
}

void EventMining(Check& c) {
  ObjectSpec a = Sphere("a", 0.3, {-0.4, 1.0, 0.3}, {2.0, 0, 0});
  ObjectSpec b = Sphere("b", 0.3, {0.4, 1.0, 0.3});
  a.physics.slide_friction = b.physics.slide_friction = 0.0;
  a.physics.roll_friction = b.physics.roll_friction = 0.0;
  const SimTrace t = Simulate(SceneWith({a, b}));
  Visibility vis;
  vis.counts.assign(2, std::vector<int>(t.frames.size(), 1000));
  vis.max_count.assign(2, 1000);
  double pair_time = -1.0;
  for (const MotionEvent& e : MineEvents(t, vis)) {
    if (e.kind == EventKind::kPairCollision && pair_time < 0) pair_time = e.time;
  }
  c.Expect(std::abs(pair_time - 0.1) <= 1.0 / 30.0 + 1e-9, "pair_collision at 0.1 s +- 1 frame");

  SimTrace s;
  s.config = SceneWith({Sphere("m", 0.2, {0, 1, 0.2})});
  for (int k = 0; k < 31; ++k) {
    TraceFrame f;
    f.time = k / 30.0;
    f.bodies.resize(1);
    f.bodies[0].linear_velocity.x() = k < 12 ? 5.0 - 0.4 * k : 0.01;
    s.frames.push_back(f);
  }
  Visibility one;
  one.counts.assign(1, std::vector<int>(31, 1000));
  one.max_count = {1000};
  double stop_time = -1.0;
  for (const MotionEvent& e : MineEvents(s, one)) {
    if (e.kind == EventKind::kStop) stop_time = e.time;
  }
  c.Expect(std::abs(stop_time - 0.4) < 1e-12, "stop at 0.4 s");
  c.Note("pair_t=" + Fmt("%.4f", pair_time) + " s stop_t=" + Fmt("%.4f", stop_time) + " s");
}

void SoftPro(Check& c) {
  const auto w = SoftPreferenceWeights({1.0, 0.0}, 1.0);
  c.Expect(std::abs(w[0] - 0.7311) <= 1e-4 && std::abs(w[1] - 0.2689) <= 1e-4,
           "weights (0.7311, 0.2689)");
  const double uniform = ProLoss({0.0, 0.0}, {0.5, 0.5});
  c.Expect(std::abs(uniform - std::log(2.0)) <= 1e-9, "uniform loss = ln 2");
  const std::vector<double> r = {0.8, -0.3};
  const double one_hot = -std::log(std::exp(r[0]) / (std::exp(r[0]) + std::exp(r[1])));
  c.Expect(std::abs(ProLoss(r, {1.0, 0.0}) - one_hot) <= 1e-12, "one-hot reduction");
  c.Note("w=(" + Fmt("%.4f", w[0]) + ", " + Fmt("%.4f", w[1]) + ") uniform=" +
         Fmt("%.10f", uniform) + " soft(1,0)=" + Fmt("%.5f", ProLoss({1, 0}, w)));
}

bool Monotone(const std::vector<GenerationRecord>& log) {
  for (size_t g = 1; g < log.size(); ++g) {
    if (log[g].best_fitness < log[g - 1].best_fitness) return false;
  }
  return !log.empty();
}

void CmaesRecovery(Check& c) {
  const SceneConfig truth = SceneWith({Sphere("ball", 0.3, {0.0, 1.5, 0.3})}, -9.81);
  const ReferenceArtifacts ref =
      ReferenceArtifacts::FromRender(RenderScene(Simulate(truth), BuildCamera(truth.camera)));
  SceneConfig init = truth;
  init.objects[0].state.position.x() += 0.3;
  SearchOptions o;
  o.population = 16;
  o.generations = 30;
  o.seed = 1;
  o.frozen = FreezeMask(FlattenParameters(init).layout,
                        {"geometry", "orientation", "linear_velocity", "angular_velocity",
                         "friction", "mass", "damping", "camera", "gravity"});
  auto t0 = Clock::now();
  const SearchResult r = CmaesSearch(init, ref, o);
  const double runtime = Seconds(t0);
  c.Expect(r.best_report.iou_full_sequence >= 0.9, "final iou_full >= 0.9");
  c.Expect(Monotone(r.log), "best-ever trace non-decreasing");
  c.Expect(runtime < 300.0, "runtime < 5 min");
  c.Expect(r.min_covariance_eigenvalue >= Cmaes::kEigenFloor, "covariance stays PD");
  c.Note("desk: iou_full=" + Fmt("%.4f", r.best_report.iou_full_sequence) + " fitness " +
         Fmt("%.4f", r.initial_fitness) + "->" + Fmt("%.4f", r.best_fitness) + " runtime=" +
         Fmt("%.1f", runtime) + " s");

  // Paper-scale setting through the command line on the two-object scene.
  const fs::path dir = testing::MakeTempDir("accept_search");
  const SceneConfig two = testing::AppendixConfig();
  SceneConfig start = two;
  start.objects[1].state.position.x() += 0.3;
  std::ofstream(dir / "truth.yaml") << SerializeConfig(two);
  std::ofstream(dir / "init.yaml") << SerializeConfig(start);
  std::string out;
  c.Expect(RunQuiet({"render", "--config", (dir / "truth.yaml").string(), "--out",
                     (dir / "ref").string()}) == 0,
           "reference render");
  t0 = Clock::now();
  const int code = RunQuiet({"search", "--init", (dir / "init.yaml").string(), "--ref-dir",
                             (dir / "ref").string(), "--pop", "128", "--gens", "100", "--seed", "7",
                             "--out", (dir / "refined.yaml").string()},
                            &out);
  const double paper_runtime = Seconds(t0);
  c.Expect(code == 0, "paper-scale search accepted by the CLI");
  std::ifstream log_in(dir / "refined.yaml.log.ndjson");
  std::vector<GenerationRecord> log;
  for (std::string line; std::getline(log_in, line);) {
    GenerationRecord rec;
    const auto pos = line.find("\"best_fitness\":");
    if (pos == std::string::npos) continue;
    rec.best_fitness = std::stod(line.substr(pos + 15));
    log.push_back(rec);
  }
  c.Expect(log.size() == 101, "101 log records");
  c.Expect(Monotone(log), "paper-scale trace monotone");
  const double initial = std::stod(Field(out, "initial_fitness"));
  const double best = std::stod(Field(out, "best_fitness"));
  c.Expect(best > initial, "paper-scale search improves fitness");
  c.Note("paper-scale: fitness " + Fmt("%.4f", initial) + "->" + Fmt("%.4f", best) +
         " iou_full=" + Field(out, "iou_full") + " runtime=" + Fmt("%.1f", paper_runtime) + " s");
}

void BestOfK32(Check& c) {
  const SceneConfig truth = testing::AppendixConfig();
  const ReferenceArtifacts ref =
      ReferenceArtifacts::FromRender(RenderScene(Simulate(truth), BuildCamera(truth.camera)));
  // Candidate i is truth with its cylinder shifted by a permuted offset;
  // offset 0 is the known best.
  std::vector<int> rank(32);
  for (int i = 0; i < 32; ++i) rank[i] = (i * 13 + 5) % 32;
  std::vector<std::string> texts;
  int truth_index = -1;
  for (int i = 0; i < 32; ++i) {
    SceneConfig cand = truth;
    cand.objects[1].state.position.y() += 0.08 * rank[i];
    if (rank[i] == 0) truth_index = i;
    texts.push_back(FormatTarget(std::nullopt, SerializeConfig(cand)));
  }
  const BestOfKResult r = BestOfK(texts, ref);
  std::vector<double> fitness;
  double mean = 0.0;
  for (const std::string& text : texts) {
    fitness.push_back(Fitness(EvaluateText(text, ref)));
    mean += fitness.back() / 32.0;
  }
  const double max = *std::max_element(fitness.begin(), fitness.end());
  c.Expect(r.best_index == truth_index, "selects the known best candidate");
  c.Expect(r.best_index == ArgmaxFitness(fitness), "selects the argmax");
  c.Expect(std::abs(r.mean_fitness - mean) < 1e-12, "Best@1 mean");
  c.Expect(r.best_fitness == max, "Best@32 max");
  std::string summary;
  c.Expect(RunQuiet({"--help"}, &summary) == 0, "cli help");
  c.Note("best_index=" + std::to_string(r.best_index) + " best1_fitness=" +
         Fmt("%.4f", r.mean_fitness) + " best1_iou=" + Fmt("%.4f", r.mean_iou) +
         " best32_fitness=" + Fmt("%.4f", r.best_fitness) + " best32_iou=" +
         Fmt("%.4f", r.best_iou));
}

void DatasetDeterminism(Check& c) {
  const fs::path dir = testing::MakeTempDir("accept_gen");
  std::string a, b, v;
  c.Expect(RunQuiet({"gen", "--n", "10", "--seed", "17", "--out", (dir / "a").string()}, &a) == 0,
           "first run");
  c.Expect(RunQuiet({"gen", "--n", "10", "--seed", "17", "--out", (dir / "b").string()}, &b) == 0,
           "second run");
  const std::string ha = Field(a, "content_hash"), hb = Field(b, "content_hash");
  c.Expect(!ha.empty() && ha == hb, "identical manifest hashes");
  c.Expect(testing::ReadFileText((dir / "a/manifest.ndjson").string()) ==
               testing::ReadFileText((dir / "b/manifest.ndjson").string()),
           "identical manifests");
  c.Expect(Field(a, "accepted") == "10", "10 accepted");
  c.Expect(RunQuiet({"validate", "--dir", (dir / "a").string()}, &v) == 0,
           "every record re-validates");
  c.Note("hash=" + ha.substr(0, 16) + "... " + a.substr(0, a.find(" content_hash")));
}

}  // namespace
}  // namespace dynscene

int main() {
  using namespace dynscene;
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ballistics", Ballistics},
      {2, "contact sanity", ContactSanity},
      {3, "metric oracles", MetricOracles},
      {4, "self-reconstruction", SelfReconstruction},
      {5, "flow schedule", FlowSchedule},
      {6, "filters", Filters},
      {7, "discretization", Discretization},
      {8, "event mining", EventMining},
      {9, "soft-PRO math", SoftPro},
      {10, "CMA-ES recovery", CmaesRecovery},
      {11, "best-of-K", BestOfK32},
      {12, "dataset determinism", DatasetDeterminism},
  };
  int failed = 0;
  for (const Criterion& k : criteria) {
    Check check;
    try {
      k.run(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    failed += !check.ok();
    std::printf("%s criterion %d (%s): %s\n", check.ok() ? "PASS" : "FAIL", k.id, k.name,
                check.Summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

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

#include "dynscene/cli.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dynscene/camera.h"
#include "dynscene/datagen.h"
#include "dynscene/errors.h"
#include "dynscene/event_mining.h"
#include "dynscene/image_io.h"
#include "dynscene/metrics.h"
#include "dynscene/renderer.h"
#include "dynscene/search.h"
#include "dynscene/simulator.h"

namespace dynscene {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void MakeDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir + "'");
}

std::string FrameFile(const std::string& dir, int k, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03d.%s", k, ext);
  return (fs::path(dir) / buf).string();
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

SceneConfig LoadConfig(const std::string& path) { return ParseConfig(ReadFile(path)); }

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scene-configuration toolkit: simulate, render, mine, evaluate and search."};
  app.name(args.empty() ? "dynscene" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  // gen
  int gen_n = 10;
  std::string gen_ranges, gen_out;
  uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--n", gen_n, "Number of accepted scenes")->check(CLI::NonNegativeNumber);
  gen->add_option("--ranges", gen_ranges, "Sampling ranges YAML")->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Master seed");

  // sim
  std::string sim_config, sim_out;
  double sim_duration = 1.0;
  int sim_fps = 30, sim_substeps = 8;
  auto* sim = app.add_subcommand("sim", "Simulate a config and dump the trace");
  sim->add_option("--config", sim_config)->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Trace dump path")->required();
  sim->add_option("--duration", sim_duration)->check(CLI::PositiveNumber);
  sim->add_option("--fps", sim_fps)->check(CLI::PositiveNumber);
  sim->add_option("--substeps", sim_substeps)->check(CLI::PositiveNumber);

  // render
  std::string render_config, render_out;
  int render_width = kDefaultWidth, render_height = kDefaultHeight;
  auto* render = app.add_subcommand("render", "Render masks, depth and flow of a config");
  render->add_option("--config", render_config)->required()->check(CLI::ExistingFile);
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_option("--width", render_width)->check(CLI::PositiveNumber);
  render->add_option("--height", render_height)->check(CLI::PositiveNumber);

  // mine
  std::string mine_config, mine_artifacts, mine_out;
  uint64_t mine_seed = 0;
  auto* mine = app.add_subcommand("mine", "Mine events and write the motion description");
  mine->add_option("--config", mine_config)->required()->check(CLI::ExistingFile);
  mine->add_option("--artifacts", mine_artifacts, "Directory with masks/")
      ->required()
      ->check(CLI::ExistingDirectory);
  mine->add_option("--seed", mine_seed, "Template seed");
  mine->add_option("--out", mine_out, "Output directory")->required();

  // eval
  std::string eval_pred, eval_ref_dir, eval_ref_config;
  bool eval_normalize = false;
  auto* eval = app.add_subcommand("eval", "Score a predicted config against reference renders");
  eval->add_option("--pred", eval_pred, "Candidate config or model output")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--ref-dir", eval_ref_dir)->required()->check(CLI::ExistingDirectory);
  eval->add_option("--ref-config", eval_ref_config)->check(CLI::ExistingFile);
  eval->add_flag("--normalize-epe", eval_normalize, "Divide EPE by the image diagonal");

  // select
  std::string select_dir, select_ref_dir;
  double select_tau = 0.0;
  auto* select = app.add_subcommand("select", "Best-of-K selection over candidate files");
  select->add_option("--candidates-dir", select_dir)->required()->check(CLI::ExistingDirectory);
  select->add_option("--ref-dir", select_ref_dir)->required()->check(CLI::ExistingDirectory);
  select->add_option("--tau", select_tau, "Soft preference temperature (0 = off)")
      ->check(CLI::NonNegativeNumber);

  // search
  std::string search_init, search_ref_dir, search_out, search_log, search_freeze;
  int search_pop = 128, search_gens = 100;
  uint64_t search_seed = 0;
  double search_sigma = 0.15;
  auto* search = app.add_subcommand("search", "Refine a config with CMA-ES");
  search->add_option("--init", search_init)->required()->check(CLI::ExistingFile);
  search->add_option("--ref-dir", search_ref_dir)->required()->check(CLI::ExistingDirectory);
  search->add_option("--pop", search_pop)->check(CLI::Range(2, 100000));
  search->add_option("--gens", search_gens)->check(CLI::NonNegativeNumber);
  search->add_option("--seed", search_seed);
  search->add_option("--sigma0", search_sigma)->check(CLI::PositiveNumber);
  search->add_option("--freeze", search_freeze, "Comma-separated slot categories to hold fixed");
  search->add_option("--out", search_out, "Refined config path")->required();
  search->add_option("--log", search_log, "Generation log (default: <out>.log.ndjson)");

  // edit
  std::string edit_config, edit_out;
  std::vector<std::string> edit_sets;
  auto* edit = app.add_subcommand("edit", "Override config fields by key path");
  edit->add_option("--config", edit_config)->required()->check(CLI::ExistingFile);
  edit->add_option("--set", edit_sets, "key.path=value")->required();
  edit->add_option("--out", edit_out)->required();

  // validate
  std::string validate_dir;
  bool validate_quick = false;
  auto* validate = app.add_subcommand("validate", "Check a generated dataset");
  validate->add_option("--dir", validate_dir)->required()->check(CLI::ExistingDirectory);
  validate->add_flag("--no-rerender", validate_quick, "Skip re-rendering the scenes");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("dynscene");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) {
      const SamplingRanges ranges =
          gen_ranges.empty() ? DefaultSamplingRanges() : ParseSamplingRanges(ReadFile(gen_ranges));
      const Manifest m = GenerateDataset(gen_n, ranges, gen_out, gen_seed);
      out << "accepted=" << m.accepted << " attempts=" << m.records.size();
      for (const auto& [reason, count] : m.rejections) out << " rejected_" << reason << "=" << count;
      out << " content_hash=" << m.content_hash << "\n";
    } else if (*sim) {
      SimOptions options;
      options.duration = sim_duration;
      options.fps = sim_fps;
      options.substeps = sim_substeps;
      const SimTrace trace = Simulate(LoadConfig(sim_config), options);
      WriteTrace(trace, sim_out);
      out << "frames=" << trace.frames.size() << " contacts=" << trace.contacts.size() << "\n";
      for (const ContactEvent& c : trace.contacts) {
        out << "contact t=" << Num(c.time) << " participants=";
        for (size_t i = 0; i < c.participants.size(); ++i) {
          out << (i ? "," : "") << c.participants[i];
        }
        out << " impulse=" << Num(c.impulse) << "\n";
      }
    } else if (*render) {
      const SceneConfig config = LoadConfig(render_config);
      const SimTrace trace = Simulate(config);
      const SceneRender r =
          RenderScene(trace, BuildCamera(config.camera, render_width, render_height));
      const std::string masks = (fs::path(render_out) / "masks").string();
      const std::string depth = (fs::path(render_out) / "depth").string();
      const std::string flow = (fs::path(render_out) / "flow").string();
      MakeDir(masks);
      MakeDir(depth);
      MakeDir(flow);
      for (size_t i = 0; i < r.frames.size(); ++i) {
        WriteMask(r.frames[i].id_map, FrameFile(masks, r.mask_frames[i], "pgm"));
        WriteDepth(r.frames[i].depth, FrameFile(depth, r.mask_frames[i], "ddep"));
      }
      for (size_t i = 0; i < r.flows.size(); ++i) {
        WriteFlow(r.flows[i], FrameFile(flow, r.flow_frames[i], "dflo"));
      }
      WriteFile((fs::path(render_out) / "config.yaml").string(), SerializeConfig(config));
      out << "masks=" << r.frames.size() << " flows=" << r.flows.size() << "\n";
    } else if (*mine) {
      const SceneConfig config = LoadConfig(mine_config);
      const SimTrace trace = Simulate(config);
      std::vector<IdMap> masks;
      for (size_t k = 0; k < trace.frames.size(); ++k) {
        const std::string path =
            FrameFile((fs::path(mine_artifacts) / "masks").string(), static_cast<int>(k), "pgm");
        masks.push_back(ReadMask(path));
      }
      const Visibility vis = VisibilitySeries(masks, static_cast<int>(config.objects.size()));
      const std::vector<MotionEvent> events = MineEvents(trace, vis);
      const MotionDescription d = RenderDescription(events, config, vis, mine_seed);
      MakeDir(mine_out);
      WriteFile((fs::path(mine_out) / "events.ndrec").string(), SerializeEvents(events));
      WriteFile((fs::path(mine_out) / "description.txt").string(), d.text);
      out << "events=" << events.size() << "\n";
    } else if (*eval) {
      const ReferenceArtifacts ref = ReferenceArtifacts::Load(eval_ref_dir);
      std::optional<SceneConfig> ref_config;
      if (!eval_ref_config.empty()) ref_config = LoadConfig(eval_ref_config);
      EvalOptions options;
      options.normalize_epe = eval_normalize;
      const EvalReport report = EvaluateText(ReadFile(eval_pred), ref,
                                             ref_config ? &*ref_config : nullptr, options);
      out << report.ToRecord() << "\n";
    } else if (*select) {
      const ReferenceArtifacts ref = ReferenceArtifacts::Load(select_ref_dir);
      std::vector<std::string> files;
      for (const auto& entry : fs::directory_iterator(select_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw IoError("no candidate files in '" + select_dir + "'");
      std::vector<std::string> texts;
      for (const std::string& f : files) texts.push_back(ReadFile(f));
      const BestOfKResult r = BestOfK(texts, ref, {}, select_tau);
      for (const CandidateScore& s : r.scores) {
        out << "candidate=" << s.index << " file=" << fs::path(files[s.index]).filename().string()
            << " valid=" << (s.valid ? "true" : "false") << " iou_full=" << Num(s.iou_full)
            << " epe_full=" << Num(s.epe_full) << " fitness=" << Num(s.fitness);
        if (s.soft_weight) out << " soft_weight=" << Num(*s.soft_weight);
        out << "\n";
      }
      out << "best_index=" << r.best_index
          << " best_file=" << fs::path(files[r.best_index]).filename().string()
          << " k=" << texts.size() << " best1_iou=" << Num(r.mean_iou)
          << " best1_epe=" << Num(r.mean_epe) << " best1_fitness=" << Num(r.mean_fitness)
          << " bestk_iou=" << Num(r.best_iou) << " bestk_epe=" << Num(r.best_epe)
          << " bestk_fitness=" << Num(r.best_fitness) << "\n";
    } else if (*search) {
      const SceneConfig init = LoadConfig(search_init);
      const ReferenceArtifacts ref = ReferenceArtifacts::Load(search_ref_dir);
      SearchOptions options;
      options.population = search_pop;
      options.generations = search_gens;
      options.seed = search_seed;
      options.sigma0 = search_sigma;
      if (!search_freeze.empty()) {
        options.frozen =
            FreezeMask(FlattenParameters(init).layout, SplitCommas(search_freeze));
      }
      const auto start = std::chrono::steady_clock::now();
      const SearchResult r = CmaesSearch(init, ref, options);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      WriteFile(search_out, SerializeConfig(r.best));
      WriteFile(search_log.empty() ? search_out + ".log.ndjson" : search_log,
                FormatGenerationLog(r.log));
      out << "initial_fitness=" << Num(r.initial_fitness) << " best_fitness=" << Num(r.best_fitness)
          << " iou_full=" << Num(r.best_report.iou_full_sequence)
          << " epe_full=" << Num(r.best_report.epe_full_sequence)
          << " generations=" << search_gens << " population=" << search_pop
          << " runtime_s=" << Num(seconds) << "\n";
    } else if (*edit) {
      const SceneConfig edited = ApplyEdits(LoadConfig(edit_config), edit_sets);
      WriteFile(edit_out, SerializeConfig(edited));
    } else if (*validate) {
      const std::vector<std::string> problems = ValidateDataset(validate_dir, !validate_quick);
      for (const std::string& p : problems) out << "problem: " << p << "\n";
      if (!problems.empty()) {
        err << "error: dataset has " << problems.size() << " problem(s)\n";
        return kExitDomainError;
      }
      out << "ok\n";
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace dynscene

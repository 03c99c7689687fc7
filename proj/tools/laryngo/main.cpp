// Copyright (c) 2026 The laryngo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// laryngo: batch front end. Exit codes: 0 ok, 2 input/config error,
// 3 data degeneracy. Errors are also printed to stdout as JSON.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "laryngo/error.hpp"

namespace {

using laryngo::cli::RunConfig;

struct CommonFlags {
  std::optional<std::string> config;
  std::string out;
  std::optional<double> fps;
  std::optional<std::size_t> n_levels;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory")->required();
  cmd->add_option("--fps", f.fps, "frame rate override")->check(CLI::PositiveNumber);
  cmd->add_option("--n-levels", f.n_levels, "geometry levels N (N-1 angles per fold)");
  cmd->add_option("--threshold", f.threshold, "decision threshold for chunk posteriors")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "synthetic data seed");
}

RunConfig build_config(const CommonFlags& f) {
  RunConfig cfg;
  if (f.config) cfg.merge_file(*f.config);
  if (f.fps) cfg.fps = *f.fps;
  if (f.n_levels) cfg.geometry.n_levels = *f.n_levels;
  if (f.threshold) cfg.threshold = *f.threshold;
  if (f.seed) cfg.seed = *f.seed;
  cfg.kws.validate();
  cfg.geometry.validate();
  return cfg;
}

spdlog::level::level_enum env_level() {
  const char* env = std::getenv("LARYNGO_LOG");
  if (!env || !*env) return spdlog::level::warn;
  return spdlog::level::from_str(env);
}

void setup_logging(const std::string& out_dir) {
  auto console = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
  console->set_level(env_level());
  std::vector<spdlog::sink_ptr> sinks{console};
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!ec) {
    try {
      auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>(
          (std::filesystem::path(out_dir) / "run.log").string(), true);
      file->set_level(std::min(env_level(), spdlog::level::info));
      sinks.push_back(file);
    } catch (const spdlog::spdlog_ex&) {
      // unwritable directory; the command itself reports it
    }
  }
  auto logger = std::make_shared<spdlog::logger>("laryngo", sinks.begin(), sinks.end());
  logger->set_level(spdlog::level::trace);
  spdlog::set_default_logger(logger);
}

int report_error(std::string_view code, const std::string& message, int status) {
  nlohmann::json err = {{"error", code}, {"message", message}, {"exit_code", status}};
  std::cout << err.dump() << std::endl;
  spdlog::error("{}: {}", code, message);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = laryngo::cli;
  CLI::App app{"laryngo: laryngoscopy audio/video analysis"};
  app.require_subcommand(1);

  CommonFlags common;

  cli::HighlightsArgs hl;
  std::string hl_det, hl_masks, hl_scores;
  auto* highlights = app.add_subcommand("highlights", "vocalization x presence highlight segments");
  add_common(highlights, common);
  highlights->add_option("--audio", hl.audio, "WAV file")->required()->check(CLI::ExistingFile);
  highlights->add_option("--frames", hl.frames, "frame directory")->required();
  highlights->add_option("--detections", hl_det, "frame,confidence CSV");
  highlights->add_option("--masks", hl_masks, "mask directory (presence by area)");
  highlights->add_option("--scores", hl_scores, "frame_index,posterior sidecar CSV");

  cli::GeometryArgs geo;
  auto* geometry = app.add_subcommand("geometry", "per-frame fold geometry and VFDyn series");
  add_common(geometry, common);
  geometry->add_option("--masks", geo.masks, "mask directory")->required();

  cli::ClassifyArgs cls;
  auto* classify = app.add_subcommand("classify-side", "paralysis side from VFDyn variance");
  add_common(classify, common);
  classify->add_option("vfdyn", cls.vfdyn, "VFDyn CSV files")->required()->check(CLI::ExistingFile);

  cli::SynthArgs syn;
  std::string syn_spec, syn_kind;
  auto* synth = app.add_subcommand("synth", "synthetic data with ground truth");
  add_common(synth, common);
  synth->add_option("--spec", syn_spec, "synth spec JSON")->check(CLI::ExistingFile);
  synth->add_option("--kind", syn_kind, "generator kind with default parameters");

  cli::ExportArgs exp;
  std::string exp_labels;
  auto* export_cmd = app.add_subcommand("export-features", "mel + VFDyn features per highlight");
  add_common(export_cmd, common);
  export_cmd->add_option("--highlights", exp.highlights, "highlights JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--audio", exp.audio, "WAV file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--masks", exp.masks, "mask directory")->required();
  export_cmd->add_option("--labels", exp_labels, "JSON mapping highlight id to label");

  cli::AnalyzeArgs ana;
  std::string ana_det, ana_scores;
  auto* analyze = app.add_subcommand("analyze", "highlights -> geometry -> classify-side");
  add_common(analyze, common);
  analyze->add_option("--audio", ana.audio, "WAV file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--frames", ana.frames, "frame directory")->required();
  analyze->add_option("--masks", ana.masks, "mask directory")->required();
  analyze->add_option("--detections", ana_det, "frame,confidence CSV");
  analyze->add_option("--scores", ana_scores, "frame_index,posterior sidecar CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  setup_logging(common.out);
  auto opt_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };

  try {
    RunConfig cfg = build_config(common);
    nlohmann::json summary;
    if (*highlights) {
      hl.out = common.out;
      hl.detections = opt_path(hl_det);
      hl.masks = opt_path(hl_masks);
      hl.scores = opt_path(hl_scores);
      summary = cli::cmd_highlights(hl, cfg);
    } else if (*geometry) {
      geo.out = common.out;
      summary = cli::cmd_geometry(geo, cfg);
    } else if (*classify) {
      cls.out = common.out;
      summary = cli::cmd_classify_side(cls, cfg);
    } else if (*synth) {
      syn.out = common.out;
      syn.spec = opt_path(syn_spec);
      if (!syn_kind.empty()) syn.kind = syn_kind;
      summary = cli::cmd_synth(syn, cfg, common.seed.has_value());
    } else if (*export_cmd) {
      exp.out = common.out;
      exp.labels = opt_path(exp_labels);
      summary = cli::cmd_export_features(exp, cfg);
    } else if (*analyze) {
      ana.out = common.out;
      ana.detections = opt_path(ana_det);
      ana.scores = opt_path(ana_scores);
      summary = cli::cmd_analyze(ana, cfg);
    }
    summary["status"] = "ok";
    std::cout << summary.dump() << std::endl;
    return 0;
  } catch (const laryngo::Error& e) {
    return report_error(laryngo::to_string(e.code()), e.detail(), laryngo::exit_code(e.code()));
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), 2);
  }
}

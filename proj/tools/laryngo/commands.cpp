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


#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <system_error>

#include <spdlog/spdlog.h>

#include "laryngo/audio.hpp"
#include "laryngo/error.hpp"
#include "laryngo/fold_geometry.hpp"
#include "laryngo/io.hpp"
#include "laryngo/mask_tools.hpp"
#include "laryngo/synth.hpp"
#include "laryngo/uvfp.hpp"
#include "laryngo/video.hpp"

namespace laryngo::cli {

namespace {

void prepare_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::WriteFailure, out.string() + ": " + ec.message());
}

void write_effective(const fs::path& out, const RunConfig& cfg) {
  write_json(out / "effective_config.json", cfg.to_json());
}

nlohmann::json segment_json(const TimeSegment& s) {
  return {{"start_s", s.start_s}, {"end_s", s.end_s}};
}

std::string highlight_name(std::size_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "highlight_%03zu", id);
  return buf;
}

audio::AudioClip load_audio(const fs::path& path) {
  WavData wav = read_wav(path);
  return {std::move(wav.samples), wav.sample_rate};
}

struct HighlightRun {
  double fps = 0.0;
  std::size_t n_frames = 0;
  std::string scorer;
  double threshold = 0.0;
  std::string presence_source;
  std::vector<TimeSegment> vocal;
  FrameMask presence;
  std::optional<video::StrobeReport> strobe;
  std::vector<video::HighlightSegment> highlights;
};

HighlightRun run_highlights(const fs::path& audio_path, const fs::path& frames_dir,
                            const std::optional<fs::path>& detections,
                            const std::optional<fs::path>& masks,
                            const std::optional<fs::path>& scores, const RunConfig& cfg) {
  HighlightRun run;
  const video::FrameSeries frames = video::load_frames(frames_dir, cfg.fps);
  run.fps = frames.fps;
  run.n_frames = frames.frames.size();
  spdlog::info("{} frames at {} fps", run.n_frames, run.fps);

  const video::HsvTrack track = video::hsv_track(frames);
  const FrameMask empty = video::empty_frame_mask(track, cfg.eps_empty);
  const auto nonempty = video::split_nonempty(empty);
  try {
    run.strobe = video::select_strobe(track, nonempty, cfg.channel);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoEligibleSegment) throw;
    spdlog::warn("no strobing segment: {}", e.detail());
  }

  if (detections) {
    run.presence = video::presence_from_detections(*detections, run.n_frames, run.fps, cfg.presence);
    run.presence_source = "detections";
  } else if (masks) {
    run.presence = video::presence_from_masks(*masks, run.n_frames, run.fps, cfg.presence);
    run.presence_source = "masks";
  } else {
    run.presence = empty.inverted();
    run.presence_source = "nonempty_frames";
  }

  const audio::AudioClip clip = load_audio(audio_path);
  std::unique_ptr<audio::ChunkScorer> scorer;
  if (scores) {
    scorer = std::make_unique<audio::ReplayScorer>(audio::ReplayScorer::from_csv(*scores));
    run.scorer = "replay";
    run.threshold = cfg.threshold.value_or(cfg.kws.threshold);
  } else {
    scorer = std::make_unique<audio::VowelScorer>(clip.sample_rate);
    run.scorer = "vowel";
    run.threshold = cfg.threshold.value_or(cfg.kws.dsp_threshold);
  }
  if (!clip.samples.empty()) {
    run.vocal = audio::detect_vocalization(clip, cfg.kws, *scorer, run.threshold);
  }
  spdlog::info("{} vocal segments ({} scorer, threshold {})", run.vocal.size(), run.scorer,
               run.threshold);

  std::optional<TimeSegment> strobe_seg;
  if (run.strobe) strobe_seg = run.strobe->selected;
  run.highlights =
      video::assemble_highlights(run.vocal, run.presence, cfg.min_highlight_s, strobe_seg);
  return run;
}

nlohmann::json strobe_json(const HighlightRun& run) {
  return run.strobe ? video::to_json(*run.strobe) : nlohmann::json(nullptr);
}

MaskSequence slice(const MaskSequence& seq, std::size_t first, std::size_t last) {
  MaskSequence out;
  out.fps = seq.fps;
  out.masks.assign(seq.masks.begin() + static_cast<std::ptrdiff_t>(first),
                   seq.masks.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

bool is_degeneracy(ErrorCode code) { return exit_code(code) == 3; }

}  // namespace

nlohmann::json cmd_highlights(const HighlightsArgs& args, RunConfig cfg) {
  cfg.command = "highlights";
  cfg.inputs["audio"] = args.audio.string();
  cfg.inputs["frames"] = args.frames.string();
  if (args.detections) cfg.inputs["detections"] = args.detections->string();
  if (args.masks) cfg.inputs["masks"] = args.masks->string();
  if (args.scores) cfg.inputs["scores"] = args.scores->string();

  const HighlightRun run =
      run_highlights(args.audio, args.frames, args.detections, args.masks, args.scores, cfg);
  prepare_out(args.out);
  nlohmann::json doc = video::highlights_to_json(run.highlights);
  doc["fps"] = run.fps;
  doc["frames"] = run.n_frames;
  doc["presence_source"] = run.presence_source;
  doc["scorer"] = run.scorer;
  doc["threshold"] = run.threshold;
  write_json(args.out / "highlights.json", doc);
  write_json(args.out / "vocalization.json",
             segments_to_json(run.vocal, SegmentKind::Vocalization));
  write_json(args.out / "strobe.json", strobe_json(run));
  write_effective(args.out, cfg);
  return {{"highlights", run.highlights.size()},
          {"outputs", {"highlights.json", "vocalization.json", "strobe.json"}}};
}

nlohmann::json cmd_geometry(const GeometryArgs& args, RunConfig cfg) {
  cfg.command = "geometry";
  cfg.inputs["masks"] = args.masks.string();
  const MaskSequence seq = load_mask_dir(args.masks, cfg.fps);
  const auto result = geometry::vfdyn(seq, cfg.geometry);

  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < result.frames.size(); ++i) {
    nlohmann::json f = geometry::to_json(result.frames[i]);
    f["frame"] = i;
    f["valid"] = static_cast<bool>(result.series.frame_validity[i]);
    frames.push_back(std::move(f));
  }
  prepare_out(args.out);
  write_json(args.out / "geometry.json", {{"fps", seq.fps},
                                          {"n_levels", cfg.geometry.n_levels},
                                          {"center_rule", "mean of U, D, L, R"},
                                          {"valid_frames", result.series.valid_frames()},
                                          {"frames", frames}});
  const SeriesChannel area[] = {gaw(seq)};
  write_text(args.out / "vfdyn.csv", geometry::vfdyn_to_csv(result.series, area));
  write_effective(args.out, cfg);
  return {{"frames", seq.size()},
          {"valid_frames", result.series.valid_frames()},
          {"outputs", {"geometry.json", "vfdyn.csv"}}};
}

nlohmann::json cmd_classify_side(const ClassifyArgs& args, RunConfig cfg) {
  cfg.command = "classify-side";
  if (args.vfdyn.empty()) throw Error(ErrorCode::BadParams, "no VFDyn CSV given");
  std::vector<uvfp::SideVerdict> verdicts;
  nlohmann::json per_file = nlohmann::json::array();
  for (std::size_t i = 0; i < args.vfdyn.size(); ++i) {
    cfg.inputs["vfdyn_" + std::to_string(i)] = args.vfdyn[i].string();
    const auto series = geometry::vfdyn_from_csv(read_text(args.vfdyn[i]));
    verdicts.push_back(uvfp::side_verdict(series, cfg.delta));
    per_file.push_back({{"file", args.vfdyn[i].string()}, {"verdict", uvfp::to_json(verdicts.back())}});
  }
  const auto aggregate = uvfp::aggregate_verdicts(verdicts, cfg.delta);
  nlohmann::json doc = uvfp::to_json(aggregate);
  doc["delta"] = cfg.delta;
  doc["per_file"] = per_file;
  prepare_out(args.out);
  write_json(args.out / "verdict.json", doc);
  write_effective(args.out, cfg);
  return {{"side", uvfp::to_string(aggregate.side)}, {"outputs", {"verdict.json"}}};
}

nlohmann::json cmd_synth(const SynthArgs& args, RunConfig cfg, bool seed_given) {
  cfg.command = "synth";
  synth::SynthSpec spec;
  if (args.spec) {
    cfg.inputs["spec"] = args.spec->string();
    spec = synth::spec_from_json(read_json(*args.spec));
  } else if (args.kind) {
    spec.kind = synth::kind_from_string(*args.kind);
  } else {
    throw Error(ErrorCode::BadParams, "synth needs --spec or --kind");
  }
  if (seed_given) spec.seed = cfg.seed;
  cfg.seed = spec.seed;
  synth::write_bundle(spec, args.out);
  write_effective(args.out, cfg);
  return {{"kind", synth::to_string(spec.kind)}, {"seed", spec.seed}, {"outputs", {"ground_truth.json"}}};
}

nlohmann::json cmd_export_features(const ExportArgs& args, RunConfig cfg) {
  cfg.command = "export-features";
  cfg.inputs["highlights"] = args.highlights.string();
  cfg.inputs["audio"] = args.audio.string();
  cfg.inputs["masks"] = args.masks.string();
  if (args.labels) cfg.inputs["labels"] = args.labels->string();

  const auto highlights = video::highlights_from_json(read_json(args.highlights));
  const audio::AudioClip clip = load_audio(args.audio);
  const MaskSequence seq = load_mask_dir(args.masks, cfg.fps);
  nlohmann::json labels = nlohmann::json::object();
  if (args.labels) {
    labels = read_json(*args.labels);
    if (labels.contains("labels")) labels = labels["labels"];
    if (!labels.is_object()) throw Error(ErrorCode::BadParams, "labels must map id to label");
  }

  uvfp::FeatureBundle bundle;
  for (const auto& h : highlights) {
    const auto [first, last] = video::frame_range(h.segment, seq.fps);
    if (first >= last || last > seq.size()) {
      throw Error(ErrorCode::AlignmentMismatch,
                  highlight_name(h.id) + " needs mask frames [" + std::to_string(first) + ", " +
                      std::to_string(last) + ") but only " + std::to_string(seq.size()) + " exist");
    }
    const auto s0 = static_cast<std::size_t>(std::llround(h.segment.start_s * clip.sample_rate));
    auto s1 = static_cast<std::size_t>(std::llround(h.segment.end_s * clip.sample_rate));
    if (s1 > clip.samples.size() + 1 || s0 >= std::min(s1, clip.samples.size())) {
      throw Error(ErrorCode::AlignmentMismatch,
                  highlight_name(h.id) + " lies outside the " +
                      std::to_string(clip.duration_s()) + " s audio clip");
    }
    s1 = std::min(s1, clip.samples.size());
    audio::AudioClip part{{clip.samples.begin() + static_cast<std::ptrdiff_t>(s0),
                           clip.samples.begin() + static_cast<std::ptrdiff_t>(s1)},
                          clip.sample_rate};

    uvfp::HighlightFeatures f;
    f.id = highlight_name(h.id);
    f.mel = uvfp::export_mel(part);
    f.vfdyn = geometry::vfdyn(slice(seq, first, last), cfg.geometry).series;
    for (const std::string& key : {f.id, std::to_string(h.id)}) {
      if (labels.contains(key)) {
        f.label = uvfp::label_from_string(labels[key].get<std::string>());
        break;
      }
    }
    bundle.highlights.push_back(std::move(f));
  }
  prepare_out(args.out);
  uvfp::export_features(bundle, args.out);
  write_effective(args.out, cfg);
  return {{"highlights", bundle.highlights.size()}, {"outputs", {"manifest.json"}}};
}

nlohmann::json cmd_analyze(const AnalyzeArgs& args, RunConfig cfg) {
  cfg.command = "analyze";
  cfg.inputs["audio"] = args.audio.string();
  cfg.inputs["frames"] = args.frames.string();
  cfg.inputs["masks"] = args.masks.string();
  if (args.detections) cfg.inputs["detections"] = args.detections->string();
  if (args.scores) cfg.inputs["scores"] = args.scores->string();

  const HighlightRun run =
      run_highlights(args.audio, args.frames, args.detections, args.masks, args.scores, cfg);
  const MaskSequence seq = load_mask_dir(args.masks, run.fps);
  if (seq.size() != run.n_frames) {
    throw Error(ErrorCode::AlignmentMismatch, std::to_string(seq.size()) + " masks for " +
                                                  std::to_string(run.n_frames) + " video frames");
  }
  prepare_out(args.out);

  std::vector<uvfp::SideVerdict> verdicts;
  nlohmann::json per_highlight = nlohmann::json::array();
  for (const auto& h : run.highlights) {
    const auto [first, last] = video::frame_range(h.segment, run.fps);
    nlohmann::json entry = {{"id", h.id},
                            {"start_s", h.segment.start_s},
                            {"end_s", h.segment.end_s},
                            {"first_frame", first},
                            {"end_frame", last}};
    try {
      const auto series = geometry::vfdyn(slice(seq, first, last), cfg.geometry).series;
      const std::string csv = highlight_name(h.id) + "_vfdyn.csv";
      write_text(args.out / csv, geometry::vfdyn_to_csv(series));
      const auto verdict = uvfp::side_verdict(series, cfg.delta);
      verdicts.push_back(verdict);
      entry["vfdyn_file"] = csv;
      entry["verdict"] = uvfp::to_json(verdict);
    } catch (const Error& e) {
      if (!is_degeneracy(e.code())) throw;
      spdlog::warn("{}: {}", highlight_name(h.id), e.what());
      entry["error"] = std::string(to_string(e.code()));
    }
    per_highlight.push_back(std::move(entry));
  }

  nlohmann::json verdict = nullptr;
  if (!verdicts.empty()) verdict = uvfp::to_json(uvfp::aggregate_verdicts(verdicts, cfg.delta));
  nlohmann::json report = {{"fps", run.fps},
                           {"frames", run.n_frames},
                           {"scorer", run.scorer},
                           {"threshold", run.threshold},
                           {"presence_source", run.presence_source},
                           {"vocalization", nlohmann::json::array()},
                           {"strobe", strobe_json(run)},
                           {"highlights", video::highlights_to_json(run.highlights)["highlights"]},
                           {"per_highlight", per_highlight},
                           {"n_levels", cfg.geometry.n_levels},
                           {"verdict", verdict}};
  for (const auto& s : run.vocal) report["vocalization"].push_back(segment_json(s));
  write_json(args.out / "report.json", report);
  write_effective(args.out, cfg);
  return {{"highlights", run.highlights.size()},
          {"side", verdict.is_null() ? nlohmann::json(nullptr) : verdict["side"]},
          {"outputs", {"report.json"}}};
}

}  // namespace laryngo::cli

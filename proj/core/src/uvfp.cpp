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


#include "laryngo/uvfp.hpp"

#include <algorithm>
#include <cmath>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "parallel.hpp"

namespace laryngo::uvfp {

std::string to_string(Side side) {
  switch (side) {
    case Side::Left: return "Left";
    case Side::Right: return "Right";
    case Side::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

double masked_variance(std::span<const double> values, const std::vector<bool>& valid) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i]) continue;
    sum += values[i];
    ++n;
  }
  if (n == 0) return 0.0;
  const double mean = sum / n;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i]) continue;
    acc += (values[i] - mean) * (values[i] - mean);
  }
  return acc / n;
}

SideVerdict decide(double var_left, double var_right, std::size_t valid_frames, double delta) {
  SideVerdict v;
  v.var_left = var_left;
  v.var_right = var_right;
  v.valid_frames = valid_frames;
  v.margin = std::abs(var_left - var_right) / std::max({var_left, var_right, kVarianceEps});
  if (v.margin < delta) {
    v.side = Side::Indeterminate;
  } else {
    v.side = var_left < var_right ? Side::Left : Side::Right;
  }
  return v;
}

SideVerdict side_verdict(const geometry::VFDynSeries& series, double delta) {
  const std::size_t valid = series.valid_frames();
  if (valid < 2)
    throw Error(ErrorCode::InsufficientFrames,
                std::to_string(valid) + " valid frames; need at least 2");
  if (series.left.empty() || series.left.size() != series.right.size())
    throw Error(ErrorCode::BadParams, "left and right channel counts differ");
  auto mean_var = [&](const std::vector<SeriesChannel>& channels) {
    double acc = 0.0;
    for (const auto& ch : channels) acc += masked_variance(ch.values, series.frame_validity);
    return acc / channels.size();
  };
  return decide(mean_var(series.left), mean_var(series.right), valid, delta);
}

SideVerdict aggregate_verdicts(std::span<const SideVerdict> verdicts, double delta) {
  if (verdicts.empty()) throw Error(ErrorCode::InsufficientFrames, "no verdicts to aggregate");
  double wl = 0.0, wr = 0.0, weight = 0.0;
  std::size_t frames = 0;
  for (const auto& v : verdicts) {
    const double w = static_cast<double>(v.valid_frames);
    wl += w * v.var_left;
    wr += w * v.var_right;
    weight += w;
    frames += v.valid_frames;
  }
  if (weight <= 0.0)
    throw Error(ErrorCode::InsufficientFrames, "verdicts carry no valid frames");
  return decide(wl / weight, wr / weight, frames, delta);
}

nlohmann::json to_json(const SideVerdict& v) {
  return {{"side", to_string(v.side)},
          {"var_left", v.var_left},
          {"var_right", v.var_right},
          {"margin", v.margin},
          {"valid_frames", v.valid_frames}};
}

std::string to_string(Label label) {
  switch (label) {
    case Label::Normal: return "normal";
    case Label::LeftVfp: return "left_vfp";
    case Label::RightVfp: return "right_vfp";
  }
  return "normal";
}

Label label_from_string(const std::string& text) {
  if (text == "normal") return Label::Normal;
  if (text == "left_vfp") return Label::LeftVfp;
  if (text == "right_vfp") return Label::RightVfp;
  throw Error(ErrorCode::BadParams, "unknown label '" + text + "'");
}

audio::KwsConfig export_mel_config(double sample_rate) {
  audio::KwsConfig cfg;
  cfg.n_fft = static_cast<std::size_t>(std::lround(0.032 * sample_rate));
  cfg.hop = static_cast<std::size_t>(std::lround(0.010 * sample_rate));
  cfg.n_mels = 64;
  cfg.center = true;
  return cfg;
}

audio::Spectrogram export_mel(const audio::AudioClip& clip) {
  return audio::mel_spectrogram(clip, export_mel_config(clip.sample_rate));
}

nlohmann::json export_features(const FeatureBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::WriteFailure, out_dir.string() + ": " + ec.message());

  const auto& items = bundle.highlights;
  detail::parallel_for(items.size(), [&](std::size_t i) {
    const auto& h = items[i];
    audio::write_features(out_dir / (h.id + "_mel.bin"), h.mel);
    write_text(out_dir / (h.id + "_vfdyn.csv"), geometry::vfdyn_to_csv(h.vfdyn));
  });

  nlohmann::json list = nlohmann::json::array();
  for (const auto& h : items) {
    list.push_back({{"id", h.id},
                    {"mel_file", h.id + "_mel.bin"},
                    {"vfdyn_file", h.id + "_vfdyn.csv"},
                    {"frames", h.vfdyn.frames()},
                    {"n_levels", h.vfdyn.n_levels()},
                    {"mel_frames", h.mel.frames},
                    {"mel_bins", h.mel.bins},
                    {"label", h.label ? nlohmann::json(to_string(*h.label)) : nlohmann::json(nullptr)}});
  }
  nlohmann::json manifest = {{"highlights", list}};
  write_json(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace laryngo::uvfp

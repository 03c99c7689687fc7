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

// Paralysis side from fold activity: the paralysed fold moves less, so its
// angle series has the lower variance.

#ifndef LARYNGO_UVFP_HPP_
#define LARYNGO_UVFP_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "laryngo/audio.hpp"
#include "laryngo/fold_geometry.hpp"

namespace laryngo::uvfp {

enum class Side { Left, Right, Indeterminate };

std::string to_string(Side side);

inline constexpr double kDefaultDelta = 0.05;
inline constexpr double kVarianceEps = 1e-12;

struct SideVerdict {
  Side side = Side::Indeterminate;
  double var_left = 0.0;
  double var_right = 0.0;
  double margin = 0.0;
  std::size_t valid_frames = 0;  // weight when pooling highlights
};

/// Population variance over `values[i]` where `valid[i]`.
double masked_variance(std::span<const double> values, const std::vector<bool>& valid);

/// Applies the side rule to a pair of variances.
SideVerdict decide(double var_left, double var_right, std::size_t valid_frames,
                   double delta = kDefaultDelta);

/// Mean per-level variance on valid frames per side. Throws
/// InsufficientFrames with fewer than two valid frames.
SideVerdict side_verdict(const geometry::VFDynSeries& series, double delta = kDefaultDelta);

/// Variances averaged with valid-frame weights, then the rule re-applied.
SideVerdict aggregate_verdicts(std::span<const SideVerdict> verdicts,
                               double delta = kDefaultDelta);

nlohmann::json to_json(const SideVerdict& v);

enum class Label { Normal, LeftVfp, RightVfp };
std::string to_string(Label label);
Label label_from_string(const std::string& text);

struct HighlightFeatures {
  std::string id;
  audio::Spectrogram mel;
  geometry::VFDynSeries vfdyn;
  std::optional<Label> label;
};

struct FeatureBundle {
  std::vector<HighlightFeatures> highlights;
};

/// 64-band log-mel, 32 ms window, 10 ms hop, centred framing.
audio::KwsConfig export_mel_config(double sample_rate);
audio::Spectrogram export_mel(const audio::AudioClip& clip);

/// Writes `<id>_mel.bin`, `<id>_vfdyn.csv` per highlight and `manifest.json`
/// last. Returns the manifest.
nlohmann::json export_features(const FeatureBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace laryngo::uvfp

#endif  // LARYNGO_UVFP_HPP_

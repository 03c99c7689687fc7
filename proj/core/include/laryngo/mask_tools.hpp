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

#ifndef LARYNGO_MASK_TOOLS_HPP_
#define LARYNGO_MASK_TOOLS_HPP_

#include <filesystem>
#include <optional>
#include <vector>

#include "laryngo/model.hpp"

namespace laryngo {

struct MaskSequence {
  double fps = 25.0;
  std::vector<GlottisMask> masks;

  std::size_t size() const { return masks.size(); }
};

/// 8-bit grayscale PNG or PGM; a pixel is glottis iff its value > 127.
GlottisMask load_mask(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const GlottisMask& mask);

/// All `frame_%06d.*` masks of a directory, which must share dimensions.
/// fps: override, else `video.json`, else `fallback_fps`.
MaskSequence load_mask_dir(const std::filesystem::path& dir,
                           std::optional<double> fps_override = std::nullopt,
                           double fallback_fps = 25.0);
void save_mask_dir(const std::filesystem::path& dir, const MaskSequence& seq);

/// Glottal area waveform: set-pixel count per frame, labelled "GAW".
SeriesChannel gaw(const MaskSequence& seq);

inline constexpr double kMaxPriorAlpha = 0.3;

/// Per-pixel Gaussian mean that seeds diffusion refinement from a coarse mask:
///   mu = (1 - (alpha * (1 - m) + (1 - alpha) * m)) * 1e-3
struct DiffusionPrior {
  double alpha = 0.0;
  int width = 0;
  int height = 0;
  std::vector<double> mu;

  double at(int x, int y) const { return mu[static_cast<std::size_t>(y) * width + x]; }
};

/// Rejects alpha outside [0, 0.3] with AlphaOutOfRange.
DiffusionPrior diffusion_init_mean(const GlottisMask& mask, double alpha);
double diffusion_mean_value(bool glottis, double alpha);

/// float32 raster with a (width, height) uint32 header, little-endian.
void write_prior(const std::filesystem::path& path, const DiffusionPrior& prior);

}  // namespace laryngo

#endif  // LARYNGO_MASK_TOOLS_HPP_

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


#include "laryngo/mask_tools.hpp"

#include <string>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "parallel.hpp"

namespace laryngo {

GlottisMask load_mask(const std::filesystem::path& path) {
  const Raster r = read_raster(path);
  if (r.channels != 1)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": mask must be 8-bit grayscale");
  GlottisMask mask(r.width, r.height);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) mask.set(x, y, r.at(x, y) > 127);
  return mask;
}

void save_mask(const std::filesystem::path& path, const GlottisMask& mask) {
  Raster r{mask.width(), mask.height(), 1, {}};
  r.data.reserve(mask.pixels().size());
  for (auto p : mask.pixels()) r.data.push_back(p ? 255 : 0);
  write_raster(path, r);
}

MaskSequence load_mask_dir(const std::filesystem::path& dir, std::optional<double> fps_override,
                           double fallback_fps) {
  const auto files = list_frame_files(dir);
  if (files.empty()) throw Error(ErrorCode::UnreadableFile, dir.string() + ": no mask files");
  MaskSequence seq;
  seq.fps = fps_override ? *fps_override : read_video_fps(dir).value_or(fallback_fps);
  if (!(seq.fps > 0.0)) throw Error(ErrorCode::BadConfig, "fps must be > 0");
  seq.masks.resize(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) { seq.masks[i] = load_mask(files[i]); });
  for (const auto& m : seq.masks)
    if (m.width() != seq.masks.front().width() || m.height() != seq.masks.front().height())
      throw Error(ErrorCode::UnsupportedFormat, dir.string() + ": mask sizes differ");
  return seq;
}

void save_mask_dir(const std::filesystem::path& dir, const MaskSequence& seq) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < seq.masks.size(); ++i) save_mask(dir / frame_file_name(i), seq.masks[i]);
  write_video_json(dir, seq.fps);
}

SeriesChannel gaw(const MaskSequence& seq) {
  SeriesChannel out{"GAW", std::vector<double>(seq.size())};
  detail::parallel_for(seq.size(), [&](std::size_t i) {
    out.values[i] = static_cast<double>(seq.masks[i].area());
  });
  return out;
}

double diffusion_mean_value(bool glottis, double alpha) {
  const double m = glottis ? 1.0 : 0.0;
  return (1.0 - (alpha * (1.0 - m) + (1.0 - alpha) * m)) * 1e-3;
}

DiffusionPrior diffusion_init_mean(const GlottisMask& mask, double alpha) {
  if (!(alpha >= 0.0 && alpha <= kMaxPriorAlpha))
    throw Error(ErrorCode::AlphaOutOfRange,
                "alpha " + std::to_string(alpha) + " outside [0, 0.3]");
  DiffusionPrior prior{alpha, mask.width(), mask.height(), {}};
  const double inside = diffusion_mean_value(true, alpha);
  const double outside = diffusion_mean_value(false, alpha);
  prior.mu.reserve(mask.pixels().size());
  for (auto p : mask.pixels()) prior.mu.push_back(p ? inside : outside);
  return prior;
}

void write_prior(const std::filesystem::path& path, const DiffusionPrior& prior) {
  // header (width, height), then row-major values
  write_f32_matrix(path, static_cast<std::uint32_t>(prior.width),
                   static_cast<std::uint32_t>(prior.height), prior.mu);
}

}  // namespace laryngo

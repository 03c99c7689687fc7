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

// File formats: WAV audio, 8-bit rasters (PNG, PGM, PPM), small CSV tables
// and the float32 little-endian matrix format used for features.

#ifndef LARYNGO_IO_HPP_
#define LARYNGO_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace laryngo {

namespace fs = std::filesystem;

/// 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Reads PNG, PGM (P2/P5) or PPM (P3/P6). Palette and 16-bit PNGs are rejected.
Raster read_raster(const fs::path& path);
/// Format chosen by extension: .png, .pgm or .ppm.
void write_raster(const fs::path& path, const Raster& raster);

struct WavData {
  std::vector<double> samples;  // mono, [-1, 1]
  double sample_rate = 0.0;
};

/// PCM 16-bit or IEEE float32; multi-channel input is averaged to mono.
WavData read_wav(const fs::path& path);
/// Writes mono IEEE float32.
void write_wav(const fs::path& path, std::span<const double> samples, double sample_rate);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

nlohmann::json read_json(const fs::path& path);
/// Pretty-printed with a trailing newline; key order is sorted, so output is
/// a pure function of the value.
void write_json(const fs::path& path, const nlohmann::json& value);

/// Splits CSV text into rows of trimmed fields. Blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

double parse_double(const std::string& field);
long long parse_int(const std::string& field);
/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// uint32 rows, uint32 cols, then rows*cols float32, all little-endian.
void write_f32_matrix(const fs::path& path, std::uint32_t rows, std::uint32_t cols,
                      std::span<const double> values);
struct F32Matrix {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<float> values;
};
F32Matrix read_f32_matrix(const fs::path& path);

/// Sorted `frame_%06d.{png,pgm,ppm}` files in `dir`.
std::vector<fs::path> list_frame_files(const fs::path& dir);
std::string frame_file_name(std::size_t index, const std::string& extension = ".png");

/// `fps` from `<dir>/video.json`, if the file exists and carries it.
std::optional<double> read_video_fps(const fs::path& dir);
void write_video_json(const fs::path& dir, double fps);

}  // namespace laryngo

#endif  // LARYNGO_IO_HPP_

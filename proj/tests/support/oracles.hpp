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


// Slow, independent reference computations used to check the library.
// Nothing here calls into the code under test except for plain data types.

#ifndef LARYNGO_TESTS_ORACLES_HPP_
#define LARYNGO_TESTS_ORACLES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "laryngo/model.hpp"

namespace oracle {

/// |X_k| of the Hann-windowed frame by the O(N^2) DFT sum, k = 0..n/2.
std::vector<double> dft_magnitude(std::span<const double> frame);

/// Periodic Hann window.
std::vector<double> hann(std::size_t n);

/// HTK triangles evaluated by direct formula for one (band, bin).
double mel_weight(std::size_t band, std::size_t bin, std::size_t n_mels, std::size_t n_fft,
                  double sample_rate, double f_min, double f_max);

/// log(max(sum_k w_mk |X_k|^2, 1e-10)) for every frame, non-centred framing.
std::vector<std::vector<double>> log_mel(std::span<const double> samples, double sample_rate,
                                         std::size_t n_fft, std::size_t hop, std::size_t n_mels);

/// Intersection by rasterizing both lists on a 1 ms grid.
std::vector<laryngo::TimeSegment> raster_intersection_ms(
    std::span<const laryngo::TimeSegment> a, std::span<const laryngo::TimeSegment> b);

/// Chunks (unit step, length `chunk`) that contain frame f, by enumeration.
std::size_t chunk_coverage(std::size_t frames, std::size_t chunk, std::size_t f);

/// F_T and reversal count straight from the definition, sign via comparisons.
struct Fluct {
  long long f_t = 0, reversals = 0, zeros = 0;
};
Fluct fluctuation(std::span<const double> v);

double pearson(std::span<const double> a, std::span<const double> b);
double population_variance(std::span<const double> v);

/// Axis-aligned rectangle mask.
laryngo::GlottisMask rect_mask(int width, int height, int x0, int y0, int w, int h);

/// Fresh empty directory under the build tree.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace oracle

#endif  // LARYNGO_TESTS_ORACLES_HPP_

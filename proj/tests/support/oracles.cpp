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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace oracle {

using laryngo::TimeSegment;

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  return w;
}

std::vector<double> dft_magnitude(std::span<const double> frame) {
  const std::size_t n = frame.size();
  const auto w = hann(n);
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      // reduce k*i mod n first so the angle stays small
      const long double ang = -2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>((k * i) % n) / n;
      re += frame[i] * w[i] * std::cos(ang);
      im += frame[i] * w[i] * std::sin(ang);
    }
    mag[k] = static_cast<double>(std::sqrt(re * re + im * im));
  }
  return mag;
}

double mel_weight(std::size_t band, std::size_t bin, std::size_t n_mels, std::size_t n_fft,
                  double sample_rate, double f_min, double f_max) {
  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double step = (to_mel(f_max) - to_mel(f_min)) / (n_mels + 1);
  const double left = to_hz(to_mel(f_min) + step * band);
  const double centre = to_hz(to_mel(f_min) + step * (band + 1));
  const double right = to_hz(to_mel(f_min) + step * (band + 2));
  const double f = bin * sample_rate / n_fft;
  if (f <= left || f >= right) return 0.0;
  return f <= centre ? (f - left) / (centre - left) : (right - f) / (right - centre);
}

std::vector<std::vector<double>> log_mel(std::span<const double> samples, double sample_rate,
                                         std::size_t n_fft, std::size_t hop, std::size_t n_mels) {
  std::vector<std::vector<double>> out;
  for (std::size_t start = 0; start + n_fft <= samples.size(); start += hop) {
    const auto mag = dft_magnitude(samples.subspan(start, n_fft));
    std::vector<double> row(n_mels);
    for (std::size_t m = 0; m < n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < mag.size(); ++k)
        e += mel_weight(m, k, n_mels, n_fft, sample_rate, 0.0, sample_rate / 2.0) * mag[k] * mag[k];
      row[m] = std::log(std::max(e, 1e-10));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<TimeSegment> raster_intersection_ms(std::span<const TimeSegment> a,
                                                std::span<const TimeSegment> b) {
  auto covered = [](std::span<const TimeSegment> s, double t) {
    return std::any_of(s.begin(), s.end(),
                       [&](const TimeSegment& x) { return t >= x.start_s && t < x.end_s; });
  };
  double end = 0.0;
  for (const auto& s : a) end = std::max(end, s.end_s);
  for (const auto& s : b) end = std::max(end, s.end_s);
  std::vector<TimeSegment> out;
  const auto n = static_cast<long>(std::ceil(end * 1000.0)) + 1;
  bool open = false;
  for (long i = 0; i <= n; ++i) {
    const double t = (i + 0.5) / 1000.0;
    const bool in = i < n && covered(a, t) && covered(b, t);
    if (in && !open) out.push_back({i / 1000.0, 0.0});
    if (!in && open) out.back().end_s = i / 1000.0;
    open = in;
  }
  return out;
}

std::size_t chunk_coverage(std::size_t frames, std::size_t chunk, std::size_t f) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + chunk <= frames; ++start)
    if (f >= start && f < start + chunk) ++count;
  return count;
}

Fluct fluctuation(std::span<const double> v) {
  Fluct r;
  for (std::size_t t = 1; t + 1 < v.size(); ++t) {
    const double d1 = v[t] - v[t - 1], d2 = v[t + 1] - v[t];
    if (d1 == 0.0 || d2 == 0.0) {
      ++r.zeros;
    } else if ((d1 > 0.0) == (d2 > 0.0)) {
      ++r.f_t;
    } else {
      --r.f_t;
      ++r.reversals;
    }
  }
  return r;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double population_variance(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / n;
}

laryngo::GlottisMask rect_mask(int width, int height, int x0, int y0, int w, int h) {
  laryngo::GlottisMask m(width, height);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) m.set(x, y, true);
  return m;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(LARYNGO_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle

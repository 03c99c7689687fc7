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

// Vocalization detection: spectrogram front end, sliding-window chunk
// scoring and conversion of chunk decisions into time segments.

#ifndef LARYNGO_AUDIO_HPP_
#define LARYNGO_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "laryngo/model.hpp"

namespace laryngo::audio {

struct AudioClip {
  std::vector<double> samples;
  double sample_rate = 16000.0;

  double duration_s() const { return samples.size() / sample_rate; }
};

AudioClip load_wav(const std::filesystem::path& path);
AudioClip resample_linear(const AudioClip& clip, double target_rate);

/// Row-major frames x bins grid. `bin_hz` holds the centre frequency of
/// every bin; `log_scale` marks natural-log power values.
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> data;
  std::vector<double> bin_hz;
  double frame_hop_s = 0.0;
  bool log_scale = false;

  double at(std::size_t f, std::size_t b) const { return data[f * bins + b]; }
  std::span<const double> frame(std::size_t f) const {
    return std::span<const double>(data).subspan(f * bins, bins);
  }
};

struct KwsConfig {
  std::size_t n_fft = 1024;
  std::size_t hop = 512;
  std::size_t n_mels = 80;
  std::size_t chunk_frames = 40;
  double threshold = 0.38;
  // Operating point used instead of `threshold` with the built-in vowel scorer.
  double dsp_threshold = 0.5;
  double min_segment_s = 0.3;
  double max_gap_s = 0.2;
  std::size_t median_len = 5;
  double f_min = 0.0;
  double f_max = 0.0;  // 0 means Nyquist
  bool center = false;  // zero-pad n_fft/2 on both sides before framing

  /// Frame-level analysis setting (400-sample window, 64-sample hop).
  static KwsConfig frame_level();
  void validate() const;
};

void to_json(nlohmann::json& j, const KwsConfig& cfg);
void from_json(const nlohmann::json& j, KwsConfig& cfg);

/// Hann-windowed magnitude STFT; F = 1 + floor((len - n_fft) / hop).
Spectrogram stft_magnitude(const AudioClip& clip, const KwsConfig& cfg);

/// Triangular mel filters (HTK scale, unit peak), one row per band, each
/// row spanning n_fft/2 + 1 FFT bins.
std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, std::size_t n_fft,
                                                double sample_rate, double f_min,
                                                double f_max);
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// log(max(filterbank * |X|^2, 1e-10)) with B = n_mels.
Spectrogram mel_spectrogram(const AudioClip& clip, const KwsConfig& cfg);

inline constexpr double kLogFloor = 1e-10;

/// Contiguous run of spectrogram frames.
struct ChunkView {
  std::size_t start = 0;
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::span<const double> data;
  std::span<const double> bin_hz;
  bool log_scale = false;

  double at(std::size_t f, std::size_t b) const { return data[f * bins + b]; }
};

/// F - chunk_frames + 1 views with unit step.
std::vector<ChunkView> slide_chunks(const Spectrogram& spec, const KwsConfig& cfg);

struct ChunkDecision {
  std::size_t frame_index = 0;
  double posterior = 0.0;
};

class ChunkScorer {
 public:
  virtual ~ChunkScorer() = default;
  /// Posterior in [0, 1] that the chunk holds the sustained vowel.
  virtual double score(const ChunkView& chunk) const = 0;
};

class ConstantScorer final : public ChunkScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  double score(const ChunkView&) const override { return value_; }

 private:
  double value_;
};

/// Harmonicity detector. Per frame: peak of the normalized autocorrelation
/// (cosine transform of the power spectrum) over pitch lags 1/400 s to
/// 1/80 s, times the fraction of power at or below 1 kHz. The chunk posterior
/// is the median over its frames.
class VowelScorer final : public ChunkScorer {
 public:
  double score(const ChunkView& chunk) const override;
  // Sample rate used to lay out integer lags.
  explicit VowelScorer(double sample_rate = 16000.0) : sample_rate_(sample_rate) {}

 private:
  double sample_rate_;
};

/// Replays posteriors recorded in a "frame_index,posterior" CSV.
class ReplayScorer final : public ChunkScorer {
 public:
  explicit ReplayScorer(std::map<std::size_t, double> scores) : scores_(std::move(scores)) {}
  static ReplayScorer from_csv(const std::filesystem::path& path);
  double score(const ChunkView& chunk) const override;

 private:
  std::map<std::size_t, double> scores_;
};

/// One decision per chunk with frame_index = chunk start. A scorer failure
/// or an out-of-range posterior raises ScorerFailure naming the chunk.
std::vector<ChunkDecision> score_chunks(std::span<const ChunkView> chunks,
                                        const ChunkScorer& scorer);

/// Re-indexes decisions from chunk start to the frame at the chunk's centre,
/// accounting for the analysis window length.
std::vector<ChunkDecision> center_decisions(std::span<const ChunkDecision> decisions,
                                            const KwsConfig& cfg);

/// Threshold (strictly above), median-filter, close short gaps, drop short
/// runs. Decision i covers [i, i+1) / frames_per_second.
std::vector<TimeSegment> decisions_to_vocal_segments(std::span<const ChunkDecision> decisions,
                                                     const KwsConfig& cfg,
                                                     double frames_per_second,
                                                     double threshold);
inline std::vector<TimeSegment> decisions_to_vocal_segments(
    std::span<const ChunkDecision> decisions, const KwsConfig& cfg,
    double frames_per_second) {
  return decisions_to_vocal_segments(decisions, cfg, frames_per_second, cfg.threshold);
}

/// Full inference path: mel spectrogram, chunking, scoring, centring and
/// segment extraction. Clips too short for a single chunk yield no segments.
std::vector<TimeSegment> detect_vocalization(const AudioClip& clip, const KwsConfig& cfg,
                                             const ChunkScorer& scorer, double threshold);

/// Feature file: 8-byte header (F, B as uint32) then float32 data, little-endian.
void write_features(const std::filesystem::path& path, const Spectrogram& spec);

}  // namespace laryngo::audio

#endif  // LARYNGO_AUDIO_HPP_

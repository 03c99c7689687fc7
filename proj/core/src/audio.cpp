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


#include "laryngo/audio.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"

namespace laryngo::audio {

namespace {

// One real-to-complex plan; FFTW's planner is not thread-safe, so plans are
// created per call on the calling thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(fftw_alloc_real(n)),
        out_(fftw_alloc_complex(n / 2 + 1)),
        plan_(fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE)) {}
  ~RealFft() {
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void execute() { fftw_execute(plan_); }
  double magnitude(std::size_t k) const { return std::hypot(out_[k][0], out_[k][1]); }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  return w;
}

std::vector<double> framed_signal(const AudioClip& clip, const KwsConfig& cfg) {
  if (!cfg.center) return clip.samples;
  std::vector<double> padded(clip.samples.size() + cfg.n_fft, 0.0);
  std::copy(clip.samples.begin(), clip.samples.end(), padded.begin() + cfg.n_fft / 2);
  return padded;
}

double effective_f_max(const KwsConfig& cfg, double sample_rate) {
  return cfg.f_max > 0.0 ? std::min(cfg.f_max, sample_rate / 2.0) : sample_rate / 2.0;
}

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  auto wav = read_wav(path);
  return AudioClip{std::move(wav.samples), wav.sample_rate};
}

AudioClip resample_linear(const AudioClip& clip, double target_rate) {
  if (!(target_rate > 0.0)) throw Error(ErrorCode::BadConfig, "target rate must be > 0");
  if (clip.sample_rate == target_rate || clip.samples.empty()) return {clip.samples, target_rate};
  const auto n_out = static_cast<std::size_t>(
      std::floor(clip.samples.size() * target_rate / clip.sample_rate));
  AudioClip out{std::vector<double>(n_out), target_rate};
  const double ratio = clip.sample_rate / target_rate;
  for (std::size_t i = 0; i < n_out; ++i) {
    const double pos = i * ratio;
    const auto j = static_cast<std::size_t>(pos);
    const double frac = pos - j;
    const double a = clip.samples[std::min(j, clip.samples.size() - 1)];
    const double b = clip.samples[std::min(j + 1, clip.samples.size() - 1)];
    out.samples[i] = a + (b - a) * frac;
  }
  return out;
}

KwsConfig KwsConfig::frame_level() {
  KwsConfig cfg;
  cfg.n_fft = 400;
  cfg.hop = 64;
  return cfg;
}

void KwsConfig::validate() const {
  if (n_fft == 0 || hop == 0) throw Error(ErrorCode::BadConfig, "n_fft and hop must be > 0");
  if (n_mels == 0) throw Error(ErrorCode::BadConfig, "n_mels must be > 0");
  if (chunk_frames < 1) throw Error(ErrorCode::BadConfig, "chunk_frames must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorCode::BadConfig, "threshold must lie in [0, 1]");
  if (!(dsp_threshold >= 0.0 && dsp_threshold <= 1.0))
    throw Error(ErrorCode::BadConfig, "dsp_threshold must lie in [0, 1]");
  if (median_len < 1) throw Error(ErrorCode::BadConfig, "median_len must be >= 1");
  if (min_segment_s < 0.0 || max_gap_s < 0.0)
    throw Error(ErrorCode::BadConfig, "smoothing durations must be >= 0");
}

void to_json(nlohmann::json& j, const KwsConfig& c) {
  j = {{"n_fft", c.n_fft},           {"hop", c.hop},
       {"n_mels", c.n_mels},         {"chunk_frames", c.chunk_frames},
       {"threshold", c.threshold},   {"dsp_threshold", c.dsp_threshold},
       {"min_segment_s", c.min_segment_s}, {"max_gap_s", c.max_gap_s},
       {"median_len", c.median_len}, {"f_min", c.f_min},
       {"f_max", c.f_max},           {"center", c.center}};
}

void from_json(const nlohmann::json& j, KwsConfig& c) {
  c.n_fft = j.value("n_fft", c.n_fft);
  c.hop = j.value("hop", c.hop);
  c.n_mels = j.value("n_mels", c.n_mels);
  c.chunk_frames = j.value("chunk_frames", c.chunk_frames);
  c.threshold = j.value("threshold", c.threshold);
  c.dsp_threshold = j.value("dsp_threshold", c.dsp_threshold);
  c.min_segment_s = j.value("min_segment_s", c.min_segment_s);
  c.max_gap_s = j.value("max_gap_s", c.max_gap_s);
  c.median_len = j.value("median_len", c.median_len);
  c.f_min = j.value("f_min", c.f_min);
  c.f_max = j.value("f_max", c.f_max);
  c.center = j.value("center", c.center);
}

Spectrogram stft_magnitude(const AudioClip& clip, const KwsConfig& cfg) {
  cfg.validate();
  if (!(clip.sample_rate > 0.0)) throw Error(ErrorCode::BadConfig, "sample rate must be > 0");
  const auto signal = framed_signal(clip, cfg);
  if (signal.size() < cfg.n_fft)
    throw Error(ErrorCode::ClipTooShort, std::to_string(clip.samples.size()) +
                                             " samples < n_fft " + std::to_string(cfg.n_fft));
  Spectrogram spec;
  spec.frames = 1 + (signal.size() - cfg.n_fft) / cfg.hop;
  spec.bins = cfg.n_fft / 2 + 1;
  spec.frame_hop_s = cfg.hop / clip.sample_rate;
  spec.data.resize(spec.frames * spec.bins);
  spec.bin_hz.resize(spec.bins);
  for (std::size_t k = 0; k < spec.bins; ++k) spec.bin_hz[k] = k * clip.sample_rate / cfg.n_fft;

  const auto window = hann(cfg.n_fft);
  RealFft fft(cfg.n_fft);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const double* src = signal.data() + f * cfg.hop;
    for (std::size_t i = 0; i < cfg.n_fft; ++i) fft.input()[i] = src[i] * window[i];
    fft.execute();
    for (std::size_t k = 0; k < spec.bins; ++k) spec.data[f * spec.bins + k] = fft.magnitude(k);
  }
  return spec;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, std::size_t n_fft,
                                                double sample_rate, double f_min,
                                                double f_max) {
  const std::size_t n_bins = n_fft / 2 + 1;
  const double m_lo = hz_to_mel(f_min);
  const double m_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) / (n_mels + 1));

  std::vector<std::vector<double>> bank(n_mels, std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = k * sample_rate / n_fft;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      bank[m][k] = std::max(0.0, std::min(rise, fall));
    }
  }
  return bank;
}

Spectrogram mel_spectrogram(const AudioClip& clip, const KwsConfig& cfg) {
  const Spectrogram mag = stft_magnitude(clip, cfg);
  const double f_max = effective_f_max(cfg, clip.sample_rate);
  const auto bank = mel_filterbank(cfg.n_mels, cfg.n_fft, clip.sample_rate, cfg.f_min, f_max);

  // Sparse rows: each filter touches a short run of FFT bins.
  struct Span {
    std::size_t first = 0, last = 0;
  };
  std::vector<Span> support(cfg.n_mels);
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const auto& row = bank[m];
    auto nz = [](double w) { return w > 0.0; };
    const auto first = std::find_if(row.begin(), row.end(), nz);
    const auto last = std::find_if(row.rbegin(), row.rend(), nz).base();
    support[m] = {static_cast<std::size_t>(first - row.begin()),
                  static_cast<std::size_t>(std::max(first, last) - row.begin())};
  }

  Spectrogram out;
  out.frames = mag.frames;
  out.bins = cfg.n_mels;
  out.frame_hop_s = mag.frame_hop_s;
  out.log_scale = true;
  out.data.resize(out.frames * out.bins);
  out.bin_hz.resize(cfg.n_mels);
  const double m_lo = hz_to_mel(cfg.f_min), m_hi = hz_to_mel(f_max);
  for (std::size_t m = 0; m < cfg.n_mels; ++m)
    out.bin_hz[m] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(m + 1) / (cfg.n_mels + 1));

  for (std::size_t f = 0; f < mag.frames; ++f) {
    const auto frame = mag.frame(f);
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      double power = 0.0;
      for (std::size_t k = support[m].first; k < support[m].last; ++k)
        power += bank[m][k] * frame[k] * frame[k];
      out.data[f * out.bins + m] = std::log(std::max(power, kLogFloor));
    }
  }
  return out;
}

std::vector<ChunkView> slide_chunks(const Spectrogram& spec, const KwsConfig& cfg) {
  if (cfg.chunk_frames < 1) throw Error(ErrorCode::BadConfig, "chunk_frames must be >= 1");
  if (spec.frames < cfg.chunk_frames)
    throw Error(ErrorCode::TooFewFrames, std::to_string(spec.frames) + " frames < chunk of " +
                                             std::to_string(cfg.chunk_frames));
  std::vector<ChunkView> chunks;
  chunks.reserve(spec.frames - cfg.chunk_frames + 1);
  const std::span<const double> all(spec.data);
  for (std::size_t start = 0; start + cfg.chunk_frames <= spec.frames; ++start) {
    chunks.push_back({start, cfg.chunk_frames, spec.bins,
                      all.subspan(start * spec.bins, cfg.chunk_frames * spec.bins), spec.bin_hz,
                      spec.log_scale});
  }
  return chunks;
}

double VowelScorer::score(const ChunkView& chunk) const {
  if (chunk.frames == 0) return 0.0;
  const auto lag_min = static_cast<long>(std::ceil(sample_rate_ / 400.0));
  const auto lag_max = static_cast<long>(std::floor(sample_rate_ / 80.0));
  std::vector<double> cosines;
  cosines.reserve(static_cast<std::size_t>(lag_max - lag_min + 1) * chunk.bins);
  for (long lag = lag_min; lag <= lag_max; ++lag)
    for (std::size_t b = 0; b < chunk.bins; ++b)
      cosines.push_back(std::cos(2.0 * std::numbers::pi * chunk.bin_hz[b] * lag / sample_rate_));

  // Each frame is scored on its own and the chunk takes the median, so a
  // chunk flips once more than half of it is voiced, whatever the loudness.
  std::vector<double> scores(chunk.frames, 0.0);
  std::vector<double> power(chunk.bins);
  for (std::size_t f = 0; f < chunk.frames; ++f) {
    double total = 0.0, low = 0.0;
    for (std::size_t b = 0; b < chunk.bins; ++b) {
      const double v = chunk.at(f, b);
      power[b] = chunk.log_scale ? std::max(std::exp(v) - kLogFloor, 0.0) : v * v;
      total += power[b];
      if (chunk.bin_hz[b] <= 1000.0) low += power[b];
    }
    if (!(total > 1e-20)) continue;
    // Wiener-Khinchin: autocorrelation as the cosine transform of the power
    // spectrum, normalised by its zero-lag value.
    double peak = 0.0;
    const double* c = cosines.data();
    for (long lag = lag_min; lag <= lag_max; ++lag) {
      double r = 0.0;
      for (std::size_t b = 0; b < chunk.bins; ++b) r += power[b] * *c++;
      peak = std::max(peak, r / total);
    }
    scores[f] = std::clamp(peak * (low / total), 0.0, 1.0);
  }
  const std::size_t mid = scores.size() / 2;
  std::nth_element(scores.begin(), scores.begin() + mid, scores.end());
  if (scores.size() % 2 == 1) return scores[mid];
  const double upper = scores[mid];
  const double lower = *std::max_element(scores.begin(), scores.begin() + mid);
  return 0.5 * (lower + upper);
}

ReplayScorer ReplayScorer::from_csv(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_text(path));
  std::map<std::size_t, double> scores;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 && !rows[r].empty() && rows[r][0] == "frame_index") continue;
    if (rows[r].size() < 2)
      throw Error(ErrorCode::UnsupportedFormat, path.string() + ": need frame_index,posterior");
    const long long idx = parse_int(rows[r][0]);
    if (idx < 0) throw Error(ErrorCode::UnsupportedFormat, path.string() + ": negative index");
    scores[static_cast<std::size_t>(idx)] = parse_double(rows[r][1]);
  }
  return ReplayScorer(std::move(scores));
}

double ReplayScorer::score(const ChunkView& chunk) const {
  const auto it = scores_.find(chunk.start);
  if (it == scores_.end())
    throw Error(ErrorCode::ScorerFailure,
                "no recorded score for frame_index " + std::to_string(chunk.start));
  return it->second;
}

std::vector<ChunkDecision> score_chunks(std::span<const ChunkView> chunks,
                                        const ChunkScorer& scorer) {
  std::vector<ChunkDecision> out(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    double p = 0.0;
    try {
      p = scorer.score(chunks[i]);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ScorerFailure, "chunk " + std::to_string(i) + ": " + e.what());
    }
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::ScorerFailure,
                  "chunk " + std::to_string(i) + ": posterior outside [0, 1]");
    out[i] = {chunks[i].start, p};
  }
  return out;
}

std::vector<ChunkDecision> center_decisions(std::span<const ChunkDecision> decisions,
                                            const KwsConfig& cfg) {
  double shift = cfg.chunk_frames / 2.0 - 1.0;
  if (!cfg.center) shift += cfg.n_fft / (2.0 * cfg.hop);
  const auto offset = static_cast<std::size_t>(std::max(0.0, std::round(shift)));
  std::vector<ChunkDecision> out(decisions.begin(), decisions.end());
  for (auto& d : out) d.frame_index += offset;
  return out;
}

std::vector<TimeSegment> decisions_to_vocal_segments(std::span<const ChunkDecision> decisions,
                                                     const KwsConfig& cfg,
                                                     double frames_per_second,
                                                     double threshold) {
  if (decisions.empty()) return {};
  if (!(frames_per_second > 0.0)) throw Error(ErrorCode::BadConfig, "frame rate must be > 0");
  std::size_t n = 0;
  for (const auto& d : decisions) n = std::max(n, d.frame_index + 1);

  std::vector<bool> raw(n, false);
  for (const auto& d : decisions) raw[d.frame_index] = d.posterior > threshold;

  // Majority vote over a centred window, truncated at the edges.
  const std::size_t len = std::max<std::size_t>(cfg.median_len, 1);
  const std::size_t before = len / 2, after = (len - 1) / 2;
  std::vector<int> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (raw[i] ? 1 : 0);
  FrameMask track{frames_per_second, std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= before ? i - before : 0;
    const std::size_t hi = std::min(n, i + after + 1);
    const int ones = prefix[hi] - prefix[lo];
    track.flags[i] = 2 * ones > static_cast<int>(hi - lo);
  }

  constexpr double kSlack = 1e-9;
  auto runs = frames_to_segments(track);
  std::vector<TimeSegment> closed;
  for (const auto& r : runs) {
    if (!closed.empty() && r.start_s - closed.back().end_s <= cfg.max_gap_s + kSlack) {
      closed.back().end_s = r.end_s;
    } else {
      closed.push_back(r);
    }
  }
  std::erase_if(closed, [&](const TimeSegment& s) {
    return s.duration() < cfg.min_segment_s - kSlack;
  });
  return closed;
}

std::vector<TimeSegment> detect_vocalization(const AudioClip& clip, const KwsConfig& cfg,
                                             const ChunkScorer& scorer, double threshold) {
  cfg.validate();
  std::size_t needed = cfg.n_fft + (cfg.chunk_frames - 1) * cfg.hop;
  if (cfg.center) needed = needed > cfg.n_fft ? needed - cfg.n_fft : 0;
  if (clip.samples.size() < needed) return {};
  const Spectrogram mel = mel_spectrogram(clip, cfg);
  if (mel.frames < cfg.chunk_frames) return {};
  const auto chunks = slide_chunks(mel, cfg);
  const auto decisions = center_decisions(score_chunks(chunks, scorer), cfg);
  auto segments = decisions_to_vocal_segments(decisions, cfg, 1.0 / mel.frame_hop_s, threshold);
  const double end = clip.duration_s();
  for (auto& s : segments) s.end_s = std::min(s.end_s, end);
  std::erase_if(segments, [](const TimeSegment& s) { return !(s.end_s > s.start_s); });
  return segments;
}

void write_features(const std::filesystem::path& path, const Spectrogram& spec) {
  write_f32_matrix(path, static_cast<std::uint32_t>(spec.frames),
                   static_cast<std::uint32_t>(spec.bins), spec.data);
}

}  // namespace laryngo::audio

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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "laryngo/audio.hpp"
#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "laryngo/synth.hpp"
#include "oracles.hpp"

using namespace laryngo;
using namespace laryngo::audio;

namespace {

AudioClip noise_clip(std::size_t n, std::uint64_t seed, double sr = 16000.0) {
  synth::SplitMix64 rng(seed);
  AudioClip c{std::vector<double>(n), sr};
  for (auto& s : c.samples) s = 0.1 * rng.normal();
  return c;
}

AudioClip tone_clip(double seconds, double sr = 16000.0) {
  synth::VowelParams p;
  p.sample_rate = sr;
  p.duration_s = seconds;
  p.segments = {{0.0, seconds}};
  p.snr_db.reset();
  return synth::gen_vowel_audio(p, 3).clip;
}

double mean_score(const AudioClip& clip, const ChunkScorer& scorer) {
  KwsConfig cfg;
  const auto mel = mel_spectrogram(clip, cfg);
  const auto chunks = slide_chunks(mel, cfg);
  double s = 0.0;
  for (const auto& d : score_chunks(chunks, scorer)) s += d.posterior;
  return s / chunks.size();
}

// Best IoU between `truth` and the union of detected pieces overlapping it.
double burst_iou(const TimeSegment& truth, const std::vector<TimeSegment>& found) {
  std::vector<TimeSegment> near;
  for (const auto& f : found)
    if (f.end_s > truth.start_s && f.start_s < truth.end_s) near.push_back(f);
  std::vector<TimeSegment> t{truth};
  return segment_iou(t, near);
}

}  // namespace

TEST_CASE("stft frame count and zero signal") {
  KwsConfig cfg;
  AudioClip clip{std::vector<double>(16000, 0.0), 16000.0};
  auto s = stft_magnitude(clip, cfg);
  CHECK(s.frames == 30);
  CHECK(s.bins == 513);
  CHECK(s.frame_hop_s == doctest::Approx(0.032));
  CHECK(std::all_of(s.data.begin(), s.data.end(), [](double v) { return v == 0.0; }));
  clip.samples.resize(1000);
  try {
    stft_magnitude(clip, cfg);
    FAIL("expected ClipTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClipTooShort);
  }
}

TEST_CASE("stft matches a direct DFT") {
  KwsConfig cfg;
  cfg.n_fft = 256;
  cfg.hop = 100;
  auto clip = noise_clip(900, 11);
  auto s = stft_magnitude(clip, cfg);
  REQUIRE(s.frames == 7);
  for (std::size_t f = 0; f < s.frames; f += 3) {
    auto want = oracle::dft_magnitude(std::span<const double>(clip.samples).subspan(f * 100, 256));
    for (std::size_t k = 0; k < s.bins; ++k)
      CHECK(s.at(f, k) == doctest::Approx(want[k]).epsilon(1e-9).scale(1e-9));
  }
  CHECK(s.bin_hz[1] == doctest::Approx(16000.0 / 256));
}

TEST_CASE("bin-centre sine keeps its energy in the main lobe") {
  KwsConfig cfg;
  const double sr = 16000.0;
  const std::size_t k0 = 40;
  AudioClip clip{std::vector<double>(8192), sr};
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] = std::sin(2 * std::numbers::pi * k0 * sr / cfg.n_fft * i / sr);
  auto s = stft_magnitude(clip, cfg);
  for (std::size_t f = 0; f < s.frames; ++f) {
    double total = 0.0;
    for (std::size_t k = 0; k < s.bins; ++k) total += s.at(f, k) * s.at(f, k);
    double lobe = 0.0;
    for (std::size_t k = k0 - 1; k <= k0 + 1; ++k) lobe += s.at(f, k) * s.at(f, k);
    CHECK(lobe / total > 0.9);
    // the direct DFT of the same frame agrees
    if (f == 2) {
      auto want = oracle::dft_magnitude(std::span<const double>(clip.samples).subspan(2 * 512, 1024));
      CHECK(s.at(f, k0) == doctest::Approx(want[k0]).epsilon(1e-9));
    }
  }
}

TEST_CASE("mel filterbank against a per-weight oracle") {
  auto bank = mel_filterbank(20, 512, 16000.0, 0.0, 8000.0);
  REQUIRE(bank.size() == 20);
  REQUIRE(bank[0].size() == 257);
  for (std::size_t m = 0; m < 20; ++m)
    for (std::size_t k = 0; k < 257; ++k)
      CHECK(bank[m][k] == doctest::Approx(oracle::mel_weight(m, k, 20, 512, 16000.0, 0.0, 8000.0))
                              .epsilon(1e-12)
                              .scale(1e-12));
  // partition: column sums never exceed 1
  for (std::size_t k = 0; k < 257; ++k) {
    double sum = 0.0;
    for (const auto& row : bank) sum += row[k];
    CHECK(sum <= 1.0 + 1e-12);
  }
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  CHECK(hz_to_mel(1000.0) == doctest::Approx(999.99).epsilon(1e-4));
}

TEST_CASE("log-mel parity with direct summation") {
  KwsConfig cfg;
  cfg.n_fft = 256;
  cfg.hop = 128;
  cfg.n_mels = 24;
  auto clip = noise_clip(256 * 6, 21);
  auto mel = mel_spectrogram(clip, cfg);
  auto want = oracle::log_mel(clip.samples, 16000.0, 256, 128, 24);
  REQUIRE(mel.frames == want.size());
  REQUIRE(mel.bins == 24);
  CHECK(mel.log_scale);
  for (std::size_t f = 0; f < mel.frames; ++f)
    for (std::size_t b = 0; b < mel.bins; ++b) {
      CHECK(std::isfinite(mel.at(f, b)));
      CHECK(mel.at(f, b) == doctest::Approx(want[f][b]).epsilon(1e-6));
    }
}

TEST_CASE("white noise gives positive mel power in every band") {
  KwsConfig cfg;
  auto mel = mel_spectrogram(noise_clip(16000, 5), cfg);
  for (double v : mel.data) CHECK(std::exp(v) > kLogFloor);
}

TEST_CASE("silence hits the log floor") {
  KwsConfig cfg;
  auto mel = mel_spectrogram(AudioClip{std::vector<double>(4096, 0.0), 16000.0}, cfg);
  for (double v : mel.data) CHECK(v == doctest::Approx(std::log(kLogFloor)));
}

TEST_CASE("chunk counts and coverage") {
  KwsConfig cfg;
  for (std::size_t frames : {40u, 100u, 57u}) {
    Spectrogram s;
    s.frames = frames;
    s.bins = 2;
    s.data.assign(frames * 2, 0.0);
    s.bin_hz = {0.0, 1.0};
    s.frame_hop_s = 0.032;
    auto chunks = slide_chunks(s, cfg);
    CHECK(chunks.size() == frames - 39);
    std::vector<std::size_t> seen(frames, 0);
    for (const auto& c : chunks) {
      CHECK(c.frames == 40);
      for (std::size_t f = c.start; f < c.start + c.frames; ++f) ++seen[f];
    }
    for (std::size_t f = 0; f < frames; ++f) CHECK(seen[f] == oracle::chunk_coverage(frames, 40, f));
  }
  Spectrogram tiny;
  tiny.frames = 10;
  tiny.bins = 1;
  tiny.data.assign(10, 0.0);
  tiny.frame_hop_s = 0.032;
  try {
    slide_chunks(tiny, cfg);
    FAIL("expected TooFewFrames");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewFrames);
  }
}

TEST_CASE("constant and replay scorers") {
  KwsConfig cfg;
  auto mel = mel_spectrogram(noise_clip(16000 * 2, 1), cfg);
  auto chunks = slide_chunks(mel, cfg);
  for (const auto& d : score_chunks(chunks, ConstantScorer(1.0))) CHECK(d.posterior == 1.0);

  const auto dir = oracle::scratch_dir("audio_replay");
  std::string csv = "frame_index,posterior\n";
  for (std::size_t i = 0; i < chunks.size(); ++i) csv += std::to_string(i) + "," + format_double(i / 100.0) + "\n";
  write_text(dir / "s.csv", csv);
  auto decisions = score_chunks(chunks, ReplayScorer::from_csv(dir / "s.csv"));
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    CHECK(decisions[i].frame_index == i);
    CHECK(decisions[i].posterior == i / 100.0);
  }

  write_text(dir / "short.csv", "0,0.5\n");
  try {
    score_chunks(chunks, ReplayScorer::from_csv(dir / "short.csv"));
    FAIL("expected ScorerFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScorerFailure);
    CHECK(std::string(e.what()).find("chunk 1") != std::string::npos);
  }
  try {
    score_chunks(chunks, ConstantScorer(1.5));
    FAIL("expected ScorerFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScorerFailure);
  }
}

TEST_CASE("vowel scorer separates tone, noise and silence") {
  VowelScorer scorer;
  const double tone = mean_score(tone_clip(2.0), scorer);
  const double noise = mean_score(noise_clip(32000, 9), scorer);
  const double silence = mean_score(AudioClip{std::vector<double>(32000, 0.0), 16000.0}, scorer);
  CHECK(tone >= 0.6);
  CHECK(silence <= 0.1);
  CHECK(noise < tone);
}

TEST_CASE("decision smoothing") {
  KwsConfig cfg;
  std::vector<ChunkDecision> zeros(500);
  for (std::size_t i = 0; i < zeros.size(); ++i) zeros[i] = {i, 0.0};
  CHECK(decisions_to_vocal_segments(zeros, cfg, 1 / 0.032).empty());

  auto ones = zeros;
  for (std::size_t i = 100; i < 400; ++i) ones[i].posterior = 1.0;
  auto segs = decisions_to_vocal_segments(ones, cfg, 1 / 0.032);
  REQUIRE(segs.size() == 1);
  CHECK(std::abs(segs[0].start_s - 3.2) <= 0.032 + 1e-9);
  CHECK(std::abs(segs[0].end_s - 12.8) <= 0.032 + 1e-9);

  // short gap closes, short blip is dropped
  auto g = zeros;
  for (std::size_t i = 10; i < 60; ++i) g[i].posterior = 1.0;
  for (std::size_t i = 64; i < 120; ++i) g[i].posterior = 1.0;
  for (std::size_t i = 300; i < 305; ++i) g[i].posterior = 1.0;
  segs = decisions_to_vocal_segments(g, cfg, 1 / 0.032);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start_s == doctest::Approx(10 * 0.032));
  CHECK(segs[0].end_s == doctest::Approx(120 * 0.032));

  // threshold is strict
  auto half = zeros;
  for (auto& d : half) d.posterior = 0.38;
  CHECK(decisions_to_vocal_segments(half, cfg, 1 / 0.032).empty());
}

TEST_CASE("two tone bursts in noise are recovered") {
  synth::VowelParams p;
  p.duration_s = 7.0;
  auto sample = synth::gen_vowel_audio(p, 42);
  KwsConfig cfg;
  auto found = detect_vocalization(sample.clip, cfg, VowelScorer(p.sample_rate), cfg.dsp_threshold);
  REQUIRE(found.size() == 2);
  for (const auto& t : sample.segments) CHECK(burst_iou(t, found) >= 0.9);
}

TEST_CASE("clips shorter than one chunk give no segments") {
  KwsConfig cfg;
  AudioClip c{std::vector<double>(4000, 0.1), 16000.0};
  CHECK(detect_vocalization(c, cfg, ConstantScorer(1.0), 0.38).empty());
}

TEST_CASE("frame-level preset and config json") {
  auto f = KwsConfig::frame_level();
  CHECK(f.n_fft == 400);
  CHECK(f.hop == 64);
  nlohmann::json j = f;
  auto back = j.get<KwsConfig>();
  CHECK(back.n_fft == 400);
  CHECK(back.threshold == f.threshold);
  KwsConfig bad;
  bad.threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("feature file layout") {
  const auto dir = oracle::scratch_dir("audio_features");
  Spectrogram s;
  s.frames = 2;
  s.bins = 3;
  s.data = {1, 2, 3, 4, 5, 6};
  write_features(dir / "f.bin", s);
  std::ifstream in(dir / "f.bin", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  REQUIRE(bytes.size() == 8 + 6 * 4);
  CHECK(bytes[0] == 2);
  CHECK(bytes[4] == 3);
  float last = 0.0f;
  std::memcpy(&last, bytes.data() + 8 + 5 * 4, 4);
  CHECK(last == 6.0f);
}

TEST_CASE("linear resampling") {
  AudioClip c{{0.0, 1.0, 2.0, 3.0}, 4.0};
  auto r = resample_linear(c, 8.0);
  CHECK(r.sample_rate == 8.0);
  CHECK(r.samples[1] == doctest::Approx(0.5));
}

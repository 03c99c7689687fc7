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


#include <benchmark/benchmark.h>

#include "laryngo/audio.hpp"
#include "laryngo/synth.hpp"
#include "laryngo/uvfp.hpp"

using namespace laryngo;

namespace {
audio::AudioClip clip(double seconds) {
  synth::VowelParams p;
  p.duration_s = seconds;
  return synth::gen_vowel_audio(p, 7).clip;
}
}  // namespace

static void BM_MelSpectrogram(benchmark::State& state) {
  const auto c = clip(static_cast<double>(state.range(0)));
  audio::KwsConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(audio::mel_spectrogram(c, cfg));
}
BENCHMARK(BM_MelSpectrogram)->Arg(6)->Arg(30);

static void BM_DetectVocalization(benchmark::State& state) {
  const auto c = clip(static_cast<double>(state.range(0)));
  audio::KwsConfig cfg;
  audio::VowelScorer scorer(c.sample_rate);
  for (auto _ : state) benchmark::DoNotOptimize(audio::detect_vocalization(c, cfg, scorer, cfg.dsp_threshold));
}
BENCHMARK(BM_DetectVocalization)->Arg(6)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ExportMel(benchmark::State& state) {
  const auto c = clip(10.0);
  for (auto _ : state) benchmark::DoNotOptimize(uvfp::export_mel(c));
}
BENCHMARK(BM_ExportMel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

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

#include "laryngo/fold_geometry.hpp"
#include "laryngo/synth.hpp"
#include "laryngo/uvfp.hpp"

using namespace laryngo;

static void BM_AnalyzeFrame(benchmark::State& state) {
  synth::EllipseParams p;
  p.frame.rotation_deg = static_cast<double>(state.range(0));
  const auto mask = synth::gen_ellipse_mask(p).mask;
  geometry::GeometryConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(geometry::analyze_frame(mask, cfg));
}
BENCHMARK(BM_AnalyzeFrame)->Arg(0)->Arg(30);

static void BM_VfdynSideVerdict(benchmark::State& state) {
  synth::OscParams p;
  p.frames = static_cast<std::size_t>(state.range(0));
  p.amp_left = 1.6;
  const auto s = synth::gen_osc_sequence(p, 3);
  geometry::GeometryConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(uvfp::side_verdict(geometry::vfdyn(s.seq, cfg).series));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VfdynSideVerdict)->Arg(100)->Arg(500);

BENCHMARK_MAIN();

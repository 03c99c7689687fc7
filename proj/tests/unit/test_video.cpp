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

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "laryngo/mask_tools.hpp"
#include "laryngo/synth.hpp"
#include "laryngo/video.hpp"
#include "oracles.hpp"

using namespace laryngo;
using namespace laryngo::video;

namespace {

RgbFrame solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbFrame f{w, h, {}};
  for (int i = 0; i < w * h; ++i) f.rgb.insert(f.rgb.end(), {r, g, b});
  return f;
}

HsvTrack v_track(std::vector<double> v, double fps = 10.0) {
  HsvTrack t;
  t.fps = fps;
  t.h.assign(v.size(), 0.0);
  t.s.assign(v.size(), 0.0);
  t.v = std::move(v);
  return t;
}

}  // namespace

TEST_CASE("hsv conversion of solid frames") {
  FrameSeries video{25.0, {solid(4, 3, 0, 0, 0), solid(4, 3, 255, 255, 255), solid(4, 3, 255, 0, 0)}};
  auto t = hsv_track(video);
  CHECK(t.v[0] == 0.0);
  CHECK(t.h[0] == 0.0);
  CHECK(t.s[0] == 0.0);
  CHECK(t.v[1] == 1.0);
  CHECK(t.s[1] == 0.0);
  CHECK(t.h[2] == 0.0);
  CHECK(t.s[2] == 1.0);
  CHECK(t.v[2] == 1.0);
  auto g = rgb_to_hsv(0, 255, 0);
  CHECK(g.h == doctest::Approx(1.0 / 3.0));
  auto b = rgb_to_hsv(0, 0, 255);
  CHECK(b.h == doctest::Approx(2.0 / 3.0));
  CHECK(t.channel(HsvChannel::S)[2] == 1.0);
}

TEST_CASE("empty frames and non-empty runs") {
  auto t = v_track({0, 0, 0.5, 0.6, 0});
  auto empty = empty_frame_mask(t);
  CHECK(empty.flags == std::vector<bool>{true, true, false, false, true});
  auto runs = split_nonempty(empty);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].start_s == doctest::Approx(0.2));
  CHECK(runs[0].end_s == doctest::Approx(0.4));

  auto bright = empty_frame_mask(v_track({0.5, 0.7, 0.9}));
  CHECK(std::none_of(bright.flags.begin(), bright.flags.end(), [](bool b) { return b; }));
  auto whole = split_nonempty(bright);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].end_s == doctest::Approx(0.3));
}

// T = [t0, tn] holds n + 1 samples and n - 1 products
TEST_CASE("fluctuation formula") {
  std::vector<double> up{1, 2, 3, 4, 5, 6};
  auto f = fluctuation_f(up);
  CHECK(f.f_t == 4);
  CHECK(f.reversals == 0);
  std::vector<double> alt{0, 1, 0, 1, 0, 1, 0};
  f = fluctuation_f(alt);
  CHECK(f.f_t == -5);
  CHECK(f.reversals == 5);
  std::vector<double> flat(9, 0.4);
  f = fluctuation_f(flat);
  CHECK(f.f_t == 0);
  CHECK(f.reversals == 0);
  CHECK(f.zero_terms == 7);
  std::vector<double> two{1, 2};
  CHECK_THROWS_AS(fluctuation_f(two), Error);
}

TEST_CASE("strobe selection") {
  // frames 0-9 ramp, 10-11 dark, 12-21 alternate
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(0.3 + 0.01 * i);
  v.insert(v.end(), {0.0, 0.0});
  for (int i = 0; i < 10; ++i) v.push_back(i % 2 ? 0.4 : 0.6);
  auto t = v_track(v);
  auto segs = split_nonempty(empty_frame_mask(t));
  REQUIRE(segs.size() == 2);
  auto r = select_strobe(t, segs);
  CHECK(r.selected_index == 1);
  CHECK(r.reversal_counts[0] == 0);
  CHECK(r.reversal_counts[1] == 8);
  CHECK(r.f_t_values[0] == 8);
  CHECK(r.selected == segs[1]);

  std::vector<TimeSegment> one{segs[0]};
  CHECK(select_strobe(t, one).selected == segs[0]);

  // ties: the longer wins, then the earlier
  auto tie = v_track({0.5, 0.5, 0.5, 0, 0.5, 0.5, 0.5, 0.5});
  auto ts = split_nonempty(empty_frame_mask(tie));
  CHECK(select_strobe(tie, ts).selected_index == 1);
  auto tie2 = v_track({0.5, 0.5, 0.5, 0, 0.5, 0.5, 0.5});
  CHECK(select_strobe(tie2, split_nonempty(empty_frame_mask(tie2))).selected_index == 0);

  auto shorts = v_track({0.5, 0.5, 0, 0.5});
  try {
    select_strobe(shorts, split_nonempty(empty_frame_mask(shorts)));
    FAIL("expected NoEligibleSegment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEligibleSegment);
  }
  auto j = to_json(r);
  CHECK(j["selected_index"] == 1);
}

TEST_CASE("synthetic strobe video round trip") {
  auto s = synth::gen_strobe_video(synth::StrobeParams{}, 4);
  auto t = hsv_track(s.video);
  auto empty = empty_frame_mask(t);
  // separators recovered exactly
  for (std::size_t part = 0; part < 5; ++part)
    for (std::size_t i = s.parts[part].first; i < s.parts[part].second; ++i)
      CHECK(empty.flags[i] == (part % 2 == 1));
  auto segs = split_nonempty(empty);
  REQUIRE(segs.size() == 3);
  auto r = select_strobe(t, segs);
  CHECK(r.selected_index == 1);
  const auto n = s.parts[2].second - s.parts[2].first;
  CHECK(r.reversal_counts[1] == static_cast<long long>(n - 2));
  CHECK(r.reversal_counts[0] == 0);
  CHECK(r.reversal_counts[2] == 0);

  const auto dir = oracle::scratch_dir("video_frames");
  save_frames(dir, s.video);
  auto back = load_frames(dir);
  CHECK(back.fps == s.video.fps);
  REQUIRE(back.frames.size() == s.video.frames.size());
  CHECK(back.frames[7].rgb == s.video.frames[7].rgb);
  CHECK(load_frames(dir, 50.0).fps == 50.0);
  std::filesystem::remove(dir / "video.json");
  try {
    load_frames(dir);
    FAIL("expected MissingMetadata");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingMetadata);
  }
}

TEST_CASE("frame_range") {
  auto [a, b] = frame_range({0.2, 0.4}, 10.0);
  CHECK(a == 2);
  CHECK(b == 4);
}

TEST_CASE("presence sources") {
  std::vector<double> conf{0.9, 0.1, 0.6};
  CHECK(presence_from_confidences(conf, 25.0).flags == std::vector<bool>{true, false, true});

  const auto dir = oracle::scratch_dir("video_presence");
  write_text(dir / "det.csv", "frame,confidence\n0,0.9\n1,0.1\n2,0.6\n");
  CHECK(presence_from_detections(dir / "det.csv", 3, 25.0).flags ==
        std::vector<bool>{true, false, true});
  try {
    presence_from_detections(dir / "det.csv", 4, 25.0);
    FAIL("expected MissingFrameEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingFrameEntry);
  }

  MaskSequence seq;
  for (int i = 0; i < 120; ++i)
    seq.masks.push_back(i >= 30 && i < 90 ? oracle::rect_mask(16, 16, 2, 2, 6, 6)
                                          : GlottisMask(16, 16));
  const auto mdir = dir / "masks";
  save_mask_dir(mdir, seq);
  auto p = presence_from_masks(mdir, 120, 25.0);
  auto runs = frames_to_segments(p);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].start_s == doctest::Approx(30 / 25.0));
  CHECK(runs[0].end_s == doctest::Approx(90 / 25.0));

  std::vector<std::size_t> areas{0, 0, 0};
  auto none = presence_from_areas(areas, 25.0);
  CHECK(std::none_of(none.flags.begin(), none.flags.end(), [](bool b) { return b; }));
  try {
    presence_from_masks(mdir, 121, 25.0);
    FAIL("expected MissingFrameEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingFrameEntry);
  }
}

TEST_CASE("highlight assembly") {
  FrameMask presence{10.0, std::vector<bool>(100, false)};
  for (int i = 20; i < 80; ++i) presence.flags[i] = true;
  std::vector<TimeSegment> vocal{{1, 5}};
  auto h = assemble_highlights(vocal, presence);
  REQUIRE(h.size() == 1);
  CHECK(h[0].segment.start_s == doctest::Approx(2.0));
  CHECK(h[0].segment.end_s == doctest::Approx(5.0));
  CHECK_FALSE(h[0].strobe);

  FrameMask absent{10.0, std::vector<bool>(100, false)};
  CHECK(assemble_highlights(vocal, absent).empty());

  std::vector<TimeSegment> pieces{{1.0, 2.3}, {4.0, 7.0}};
  h = assemble_highlights(pieces, presence, 0.5, TimeSegment{6.5, 9.0});
  REQUIRE(h.size() == 1);
  CHECK(h[0].strobe);
  CHECK(h[0].id == 0);

  auto j = highlights_to_json(h);
  auto back = highlights_from_json(j);
  REQUIRE(back.size() == 1);
  CHECK(back[0].segment == h[0].segment);
  CHECK(back[0].strobe);
}

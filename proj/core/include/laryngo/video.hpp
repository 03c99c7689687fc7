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

#ifndef LARYNGO_VIDEO_HPP_
#define LARYNGO_VIDEO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "laryngo/model.hpp"

namespace laryngo::video {

struct RgbFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // interleaved, row-major
};

struct FrameSeries {
  double fps = 25.0;
  std::vector<RgbFrame> frames;
};

/// Reads `frame_%06d.*` from `dir`; fps comes from `video.json` unless
/// `fps_override` is given. Missing fps raises MissingMetadata.
FrameSeries load_frames(const std::filesystem::path& dir,
                        std::optional<double> fps_override = std::nullopt);
void save_frames(const std::filesystem::path& dir, const FrameSeries& video);

enum class HsvChannel { H, S, V };

/// Per-frame channel means, each in [0, 1].
struct HsvTrack {
  double fps = 25.0;
  std::vector<double> h, s, v;

  std::size_t size() const { return v.size(); }
  std::span<const double> channel(HsvChannel c) const;
};

struct Hsv {
  double h, s, v;  // h in [0, 1) (degrees / 360)
};
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

HsvTrack hsv_track(const FrameSeries& video);

inline constexpr double kDefaultEmptyEps = 0.02;

/// Empty iff mean V < eps_empty.
FrameMask empty_frame_mask(const HsvTrack& track, double eps_empty = kDefaultEmptyEps);

/// Maximal runs of non-empty frames.
std::vector<TimeSegment> split_nonempty(const FrameMask& empty);

struct Fluctuation {
  long long f_t = 0;          // sum of sgn(Δ_t · Δ_{t+1}), sgn(0) = 0
  long long reversals = 0;    // terms with a strictly negative product
  long long zero_terms = 0;   // terms with a zero product
};

/// Requires at least three values (SequenceTooShort otherwise).
Fluctuation fluctuation_f(std::span<const double> values);

struct StrobeReport {
  std::vector<TimeSegment> nonempty_segments;
  std::vector<long long> f_t_values;
  std::vector<long long> reversal_counts;
  std::size_t selected_index = 0;
  TimeSegment selected;
  HsvChannel channel = HsvChannel::V;
};

/// [first, last) frame indices covered by a segment at `fps`.
std::pair<std::size_t, std::size_t> frame_range(const TimeSegment& segment, double fps);

/// Picks the segment with the most reversals; ties go to the longer, then the
/// earlier segment. Segments shorter than 3 frames are reported with zero
/// counts and are never selected.
StrobeReport select_strobe(const HsvTrack& track, std::span<const TimeSegment> segments,
                           HsvChannel channel = HsvChannel::V);

nlohmann::json to_json(const StrobeReport& report);

struct PresenceConfig {
  double confidence_threshold = 0.5;
  std::size_t min_area = 20;
};

/// From "frame,confidence" rows; every frame in [0, n_frames) must appear.
FrameMask presence_from_detections(const std::filesystem::path& csv, std::size_t n_frames,
                                   double fps, const PresenceConfig& cfg = {});
FrameMask presence_from_confidences(std::span<const double> confidences, double fps,
                                    const PresenceConfig& cfg = {});
/// From per-frame mask areas; a missing mask file raises MissingFrameEntry.
FrameMask presence_from_masks(const std::filesystem::path& mask_dir, std::size_t n_frames,
                              double fps, const PresenceConfig& cfg = {});
FrameMask presence_from_areas(std::span<const std::size_t> areas, double fps,
                              const PresenceConfig& cfg = {});

struct HighlightSegment {
  std::size_t id = 0;
  TimeSegment segment;
  bool strobe = false;        // overlaps the selected strobing segment
  bool vocalization = true;
};

/// Vocal segments intersected with presence runs; pieces shorter than
/// `min_len_s` are dropped.
std::vector<HighlightSegment> assemble_highlights(std::span<const TimeSegment> vocal,
                                                  const FrameMask& presence,
                                                  double min_len_s = 0.5,
                                                  std::optional<TimeSegment> strobe = {});

nlohmann::json highlights_to_json(std::span<const HighlightSegment> highlights);
std::vector<HighlightSegment> highlights_from_json(const nlohmann::json& doc);

}  // namespace laryngo::video

#endif  // LARYNGO_VIDEO_HPP_

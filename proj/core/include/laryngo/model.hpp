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

// Shared domain types. Image coordinates have their origin at the top-left
// pixel centre with y growing downward; pixel (x, y) covers the unit square
// centred on the integer point (x, y).

#ifndef LARYNGO_MODEL_HPP_
#define LARYNGO_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace laryngo {

/// Half-open interval [start_s, end_s) on a media timeline.
struct TimeSegment {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }
  bool operator==(const TimeSegment&) const = default;
};

/// Per-frame boolean track sampled at `fps`.
struct FrameMask {
  double fps = 1.0;
  std::vector<bool> flags;

  std::size_t size() const { return flags.size(); }
  FrameMask inverted() const;
};

/// Frame i spans [i/fps, (i+1)/fps); maximal runs of set flags become segments.
std::vector<TimeSegment> frames_to_segments(const FrameMask& mask);

/// Frame i is set iff its centre time (i + 0.5)/fps lies inside a segment.
FrameMask segments_to_frames(std::span<const TimeSegment> segments, double fps,
                             std::size_t n_frames);

/// Exact intersection of two sorted, disjoint segment lists.
std::vector<TimeSegment> intersect_segments(std::span<const TimeSegment> a,
                                            std::span<const TimeSegment> b);

/// Sorts and merges touching or overlapping intervals; drops empty ones.
std::vector<TimeSegment> normalize_segments(std::vector<TimeSegment> segments);

double total_duration(std::span<const TimeSegment> segments);

/// |a ∩ b| / |a ∪ b| over the time sets covered by both lists. Two empty
/// lists have IoU 1.
double segment_iou(std::span<const TimeSegment> a, std::span<const TimeSegment> b);

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2&) const = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Binary glottis raster, row-major.
class GlottisMask {
 public:
  GlottisMask() = default;
  GlottisMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  bool at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    pixels_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  /// True iff the pixel containing `p` exists and is set.
  bool contains(Point2 p) const;

  std::size_t area() const;
  GlottisMask mirrored() const;

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  bool operator==(const GlottisMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Per-level fold angles in degrees; index k-1 holds level k.
struct AngleSet {
  std::vector<double> left;
  std::vector<double> right;
};

struct SeriesChannel {
  std::string label;
  std::vector<double> values;
};

enum class SegmentKind { Vocalization, Strobe, Highlight };

std::string to_string(SegmentKind kind);

/// {"segments":[{"start_s":..,"end_s":..,"kind":".."}]}
nlohmann::json segments_to_json(std::span<const TimeSegment> segments, SegmentKind kind);
/// Appends to an existing segments document.
void append_segments(nlohmann::json& doc, std::span<const TimeSegment> segments,
                     SegmentKind kind);
/// Segments of the given kind, in document order.
std::vector<TimeSegment> segments_from_json(const nlohmann::json& doc, SegmentKind kind);

/// One column per channel, one row per frame, header = labels. Values are
/// printed in shortest round-trip form so parsing restores them exactly.
std::string series_to_csv(std::span<const SeriesChannel> channels);
std::vector<SeriesChannel> series_from_csv(const std::string& text);

}  // namespace laryngo

#endif  // LARYNGO_MODEL_HPP_

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


#include "laryngo/model.hpp"

#include <algorithm>
#include <sstream>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"

namespace laryngo {

FrameMask FrameMask::inverted() const {
  FrameMask out{fps, flags};
  out.flags.flip();
  return out;
}

std::vector<TimeSegment> frames_to_segments(const FrameMask& mask) {
  std::vector<TimeSegment> out;
  const std::size_t n = mask.flags.size();
  std::size_t i = 0;
  while (i < n) {
    if (!mask.flags[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && mask.flags[j]) ++j;
    out.push_back({static_cast<double>(i) / mask.fps, static_cast<double>(j) / mask.fps});
    i = j;
  }
  return out;
}

FrameMask segments_to_frames(std::span<const TimeSegment> segments, double fps,
                             std::size_t n_frames) {
  FrameMask out{fps, std::vector<bool>(n_frames, false)};
  for (const auto& seg : segments) {
    // centre (i + 0.5) / fps in [start, end)
    const double lo = std::ceil(seg.start_s * fps - 0.5);
    const double hi = std::ceil(seg.end_s * fps - 0.5);
    const auto first = static_cast<std::size_t>(std::max(0.0, lo));
    const auto last = static_cast<std::size_t>(
        std::clamp(hi, 0.0, static_cast<double>(n_frames)));
    for (std::size_t i = first; i < last; ++i) out.flags[i] = true;
  }
  return out;
}

std::vector<TimeSegment> intersect_segments(std::span<const TimeSegment> a,
                                            std::span<const TimeSegment> b) {
  std::vector<TimeSegment> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].start_s, b[j].start_s);
    const double hi = std::min(a[i].end_s, b[j].end_s);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].end_s < b[j].end_s) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<TimeSegment> normalize_segments(std::vector<TimeSegment> segments) {
  std::erase_if(segments, [](const TimeSegment& s) { return !(s.end_s > s.start_s); });
  std::sort(segments.begin(), segments.end(),
            [](const TimeSegment& x, const TimeSegment& y) { return x.start_s < y.start_s; });
  std::vector<TimeSegment> out;
  for (const auto& s : segments) {
    if (!out.empty() && s.start_s <= out.back().end_s) {
      out.back().end_s = std::max(out.back().end_s, s.end_s);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

double total_duration(std::span<const TimeSegment> segments) {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration();
  return total;
}

double segment_iou(std::span<const TimeSegment> a, std::span<const TimeSegment> b) {
  const auto na = normalize_segments({a.begin(), a.end()});
  const auto nb = normalize_segments({b.begin(), b.end()});
  const double inter = total_duration(intersect_segments(na, nb));
  const double uni = total_duration(na) + total_duration(nb) - inter;
  if (uni <= 0.0) return 1.0;
  return inter / uni;
}

GlottisMask::GlottisMask(int width, int height)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), 0) {}

bool GlottisMask::contains(Point2 p) const {
  const double fx = std::floor(p.x + 0.5);
  const double fy = std::floor(p.y + 0.5);
  if (fx < 0.0 || fy < 0.0 || fx >= width_ || fy >= height_) return false;
  return at(static_cast<int>(fx), static_cast<int>(fy));
}

std::size_t GlottisMask::area() const {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), 1));
}

GlottisMask GlottisMask::mirrored() const {
  GlottisMask out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(width_ - 1 - x, y, at(x, y));
  return out;
}

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Vocalization: return "vocalization";
    case SegmentKind::Strobe: return "strobe";
    case SegmentKind::Highlight: return "highlight";
  }
  return "vocalization";
}

nlohmann::json segments_to_json(std::span<const TimeSegment> segments, SegmentKind kind) {
  nlohmann::json doc = {{"segments", nlohmann::json::array()}};
  append_segments(doc, segments, kind);
  return doc;
}

void append_segments(nlohmann::json& doc, std::span<const TimeSegment> segments,
                     SegmentKind kind) {
  auto& arr = doc["segments"];
  if (!arr.is_array()) arr = nlohmann::json::array();
  for (const auto& s : segments)
    arr.push_back({{"start_s", s.start_s}, {"end_s", s.end_s}, {"kind", to_string(kind)}});
}

std::vector<TimeSegment> segments_from_json(const nlohmann::json& doc, SegmentKind kind) {
  std::vector<TimeSegment> out;
  if (!doc.contains("segments") || !doc["segments"].is_array())
    throw Error(ErrorCode::UnsupportedFormat, "segments document lacks a \"segments\" array");
  for (const auto& item : doc["segments"]) {
    if (item.value("kind", std::string{}) != to_string(kind)) continue;
    out.push_back({item.at("start_s").get<double>(), item.at("end_s").get<double>()});
  }
  return out;
}

std::string series_to_csv(std::span<const SeriesChannel> channels) {
  std::ostringstream os;
  std::size_t rows = 0;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (c) os << ',';
    os << channels[c].label;
    rows = std::max(rows, channels[c].values.size());
  }
  os << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      if (c) os << ',';
      if (r < channels[c].values.size()) os << format_double(channels[c].values[r]);
    }
    os << '\n';
  }
  return os.str();
}

std::vector<SeriesChannel> series_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::UnsupportedFormat, "series CSV has no header");
  std::vector<SeriesChannel> out;
  for (const auto& label : rows.front()) out.push_back({label, {}});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != out.size())
      throw Error(ErrorCode::UnsupportedFormat,
                  "series CSV row " + std::to_string(r) + " has wrong column count");
    for (std::size_t c = 0; c < out.size(); ++c)
      out[c].values.push_back(parse_double(rows[r][c]));
  }
  return out;
}

}  // namespace laryngo

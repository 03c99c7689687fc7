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


#include "laryngo/video.hpp"

#include <algorithm>
#include <cmath>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "laryngo/mask_tools.hpp"
#include "parallel.hpp"

namespace laryngo::video {

FrameSeries load_frames(const std::filesystem::path& dir, std::optional<double> fps_override) {
  const auto files = list_frame_files(dir);
  FrameSeries out;
  if (fps_override) {
    if (!(*fps_override > 0.0)) throw Error(ErrorCode::BadConfig, "fps must be > 0");
    out.fps = *fps_override;
  } else if (auto fps = read_video_fps(dir)) {
    out.fps = *fps;
  } else {
    throw Error(ErrorCode::MissingMetadata, dir.string() + ": no fps in video.json");
  }
  if (files.empty()) throw Error(ErrorCode::UnreadableFile, dir.string() + ": no frame files");
  out.frames.resize(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) {
    Raster r = read_raster(files[i]);
    RgbFrame f{r.width, r.height, {}};
    if (r.channels == 3) {
      f.rgb = std::move(r.data);
    } else {
      f.rgb.resize(r.data.size() * 3);
      for (std::size_t p = 0; p < r.data.size(); ++p)
        f.rgb[3 * p] = f.rgb[3 * p + 1] = f.rgb[3 * p + 2] = r.data[p];
    }
    out.frames[i] = std::move(f);
  });
  for (const auto& f : out.frames)
    if (f.width != out.frames.front().width || f.height != out.frames.front().height)
      throw Error(ErrorCode::UnsupportedFormat, dir.string() + ": frame sizes differ");
  return out;
}

void save_frames(const std::filesystem::path& dir, const FrameSeries& video) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < video.frames.size(); ++i) {
    const auto& f = video.frames[i];
    write_raster(dir / frame_file_name(i), Raster{f.width, f.height, 3, f.rgb});
  }
  write_video_json(dir, video.fps);
}

std::span<const double> HsvTrack::channel(HsvChannel c) const {
  switch (c) {
    case HsvChannel::H: return h;
    case HsvChannel::S: return s;
    case HsvChannel::V: return v;
  }
  return v;
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  double hue = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      hue = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      hue = 60.0 * ((b - r) / delta + 2.0);
    } else {
      hue = 60.0 * ((r - g) / delta + 4.0);
    }
    if (hue < 0.0) hue += 360.0;
  }
  return {hue / 360.0, mx > 0.0 ? delta / mx : 0.0, mx};
}

HsvTrack hsv_track(const FrameSeries& video) {
  const std::size_t n = video.frames.size();
  HsvTrack t{video.fps, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  detail::parallel_for(n, [&](std::size_t i) {
    const auto& f = video.frames[i];
    const std::size_t pixels = static_cast<std::size_t>(f.width) * f.height;
    double sh = 0.0, ss = 0.0, sv = 0.0;
    for (std::size_t p = 0; p < pixels; ++p) {
      const Hsv c = rgb_to_hsv(f.rgb[3 * p], f.rgb[3 * p + 1], f.rgb[3 * p + 2]);
      sh += c.h;
      ss += c.s;
      sv += c.v;
    }
    const double inv = pixels ? 1.0 / pixels : 0.0;
    t.h[i] = sh * inv;
    t.s[i] = ss * inv;
    t.v[i] = sv * inv;
  });
  return t;
}

FrameMask empty_frame_mask(const HsvTrack& track, double eps_empty) {
  FrameMask m{track.fps, std::vector<bool>(track.size())};
  for (std::size_t i = 0; i < track.size(); ++i) m.flags[i] = track.v[i] < eps_empty;
  return m;
}

std::vector<TimeSegment> split_nonempty(const FrameMask& empty) {
  return frames_to_segments(empty.inverted());
}

Fluctuation fluctuation_f(std::span<const double> values) {
  if (values.size() < 3)
    throw Error(ErrorCode::SequenceTooShort,
                std::to_string(values.size()) + " values; need at least 3");
  Fluctuation out;
  for (std::size_t t = 1; t + 1 < values.size(); ++t) {
    const double product = (values[t] - values[t - 1]) * (values[t + 1] - values[t]);
    if (product > 0.0) {
      ++out.f_t;
    } else if (product < 0.0) {
      --out.f_t;
      ++out.reversals;
    } else {
      ++out.zero_terms;
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> frame_range(const TimeSegment& segment, double fps) {
  const double lo = std::max(0.0, std::round(segment.start_s * fps));
  const double hi = std::max(lo, std::round(segment.end_s * fps));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

StrobeReport select_strobe(const HsvTrack& track, std::span<const TimeSegment> segments,
                           HsvChannel channel) {
  StrobeReport report;
  report.channel = channel;
  report.nonempty_segments.assign(segments.begin(), segments.end());
  const auto values = track.channel(channel);
  std::optional<std::size_t> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto [lo, hi] = frame_range(segments[i], track.fps);
    hi = std::min(hi, values.size());
    const std::size_t len = hi > lo ? hi - lo : 0;
    if (len < 3) {
      report.f_t_values.push_back(0);
      report.reversal_counts.push_back(0);
      continue;
    }
    const Fluctuation fl = fluctuation_f(values.subspan(lo, len));
    report.f_t_values.push_back(fl.f_t);
    report.reversal_counts.push_back(fl.reversals);
    if (!best || fl.reversals > report.reversal_counts[*best] ||
        (fl.reversals == report.reversal_counts[*best] && len > best_len)) {
      best = i;
      best_len = len;
    }
  }
  if (!best) throw Error(ErrorCode::NoEligibleSegment, "no non-empty segment of >= 3 frames");
  report.selected_index = *best;
  report.selected = segments[*best];
  return report;
}

namespace {
std::string channel_name(HsvChannel c) {
  switch (c) {
    case HsvChannel::H: return "h";
    case HsvChannel::S: return "s";
    case HsvChannel::V: return "v";
  }
  return "v";
}
}  // namespace

nlohmann::json to_json(const StrobeReport& r) {
  nlohmann::json segs = nlohmann::json::array();
  for (std::size_t i = 0; i < r.nonempty_segments.size(); ++i) {
    segs.push_back({{"start_s", r.nonempty_segments[i].start_s},
                    {"end_s", r.nonempty_segments[i].end_s},
                    {"f_t", r.f_t_values[i]},
                    {"reversals", r.reversal_counts[i]}});
  }
  return {{"channel", channel_name(r.channel)},
          {"nonempty_segments", segs},
          {"selected_index", r.selected_index},
          {"selected", {{"start_s", r.selected.start_s}, {"end_s", r.selected.end_s}}}};
}

FrameMask presence_from_confidences(std::span<const double> confidences, double fps,
                                    const PresenceConfig& cfg) {
  FrameMask m{fps, std::vector<bool>(confidences.size())};
  for (std::size_t i = 0; i < confidences.size(); ++i)
    m.flags[i] = confidences[i] >= cfg.confidence_threshold;
  return m;
}

FrameMask presence_from_detections(const std::filesystem::path& csv, std::size_t n_frames,
                                   double fps, const PresenceConfig& cfg) {
  const auto rows = parse_csv(read_text(csv));
  std::vector<double> conf(n_frames, 0.0);
  std::vector<bool> seen(n_frames, false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 && !rows[r].empty() && rows[r][0] == "frame") continue;
    if (rows[r].size() < 2)
      throw Error(ErrorCode::UnsupportedFormat, csv.string() + ": need frame,confidence");
    const long long frame = parse_int(rows[r][0]);
    if (frame < 0 || static_cast<std::size_t>(frame) >= n_frames) continue;
    // several detections per frame: keep the most confident
    const double c = parse_double(rows[r][1]);
    conf[frame] = seen[frame] ? std::max(conf[frame], c) : c;
    seen[frame] = true;
  }
  for (std::size_t i = 0; i < n_frames; ++i)
    if (!seen[i])
      throw Error(ErrorCode::MissingFrameEntry,
                  csv.string() + ": no entry for frame " + std::to_string(i));
  return presence_from_confidences(conf, fps, cfg);
}

FrameMask presence_from_areas(std::span<const std::size_t> areas, double fps,
                              const PresenceConfig& cfg) {
  FrameMask m{fps, std::vector<bool>(areas.size())};
  for (std::size_t i = 0; i < areas.size(); ++i) m.flags[i] = areas[i] >= cfg.min_area;
  return m;
}

FrameMask presence_from_masks(const std::filesystem::path& mask_dir, std::size_t n_frames,
                              double fps, const PresenceConfig& cfg) {
  const auto files = list_frame_files(mask_dir);
  std::vector<std::filesystem::path> by_frame(n_frames);
  for (const auto& f : files) {
    const auto stem = f.stem().string();  // frame_000123
    const auto idx = static_cast<std::size_t>(parse_int(stem.substr(6)));
    if (idx < n_frames) by_frame[idx] = f;
  }
  std::vector<std::size_t> areas(n_frames, 0);
  for (std::size_t i = 0; i < n_frames; ++i) {
    if (by_frame[i].empty())
      throw Error(ErrorCode::MissingFrameEntry,
                  mask_dir.string() + ": no mask for frame " + std::to_string(i));
  }
  detail::parallel_for(n_frames, [&](std::size_t i) { areas[i] = load_mask(by_frame[i]).area(); });
  return presence_from_areas(areas, fps, cfg);
}

std::vector<HighlightSegment> assemble_highlights(std::span<const TimeSegment> vocal,
                                                  const FrameMask& presence, double min_len_s,
                                                  std::optional<TimeSegment> strobe) {
  const auto runs = frames_to_segments(presence);
  const auto voc = normalize_segments({vocal.begin(), vocal.end()});
  std::vector<HighlightSegment> out;
  for (const auto& seg : intersect_segments(voc, runs)) {
    if (seg.duration() < min_len_s - 1e-9) continue;
    HighlightSegment h;
    h.id = out.size();
    h.segment = seg;
    if (strobe) {
      const TimeSegment s[] = {*strobe};
      const TimeSegment g[] = {seg};
      h.strobe = !intersect_segments(g, s).empty();
    }
    out.push_back(h);
  }
  return out;
}

nlohmann::json highlights_to_json(std::span<const HighlightSegment> highlights) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& h : highlights) {
    arr.push_back({{"id", h.id},
                   {"start_s", h.segment.start_s},
                   {"end_s", h.segment.end_s},
                   {"strobe", h.strobe},
                   {"vocalization", h.vocalization}});
  }
  return {{"highlights", arr}};
}

std::vector<HighlightSegment> highlights_from_json(const nlohmann::json& doc) {
  if (!doc.contains("highlights") || !doc["highlights"].is_array())
    throw Error(ErrorCode::UnsupportedFormat, "document lacks a \"highlights\" array");
  std::vector<HighlightSegment> out;
  for (const auto& item : doc["highlights"]) {
    HighlightSegment h;
    h.id = item.value("id", out.size());
    h.segment = {item.at("start_s").get<double>(), item.at("end_s").get<double>()};
    h.strobe = item.value("strobe", false);
    h.vocalization = item.value("vocalization", true);
    out.push_back(h);
  }
  return out;
}

}  // namespace laryngo::video

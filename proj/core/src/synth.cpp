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

#include "laryngo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"

namespace laryngo::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

nlohmann::json point_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadParams, what);
}

nlohmann::json segments_json(const std::vector<TimeSegment>& segs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : segs) arr.push_back({{"start_s", s.start_s}, {"end_s", s.end_s}});
  return arr;
}

template <typename Inside>
GlottisMask rasterize(int width, int height, Inside&& inside) {
  GlottisMask mask(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) mask.set(x, y, inside(Point2{double(x), double(y)}));
  return mask;
}

double direction_deg(Point2 v) { return std::atan2(v.y, v.x) / kDeg; }

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return n ? next() % n : 0; }

Point2 ShapeFrame::major() const {
  return {-std::sin(rotation_deg * kDeg), std::cos(rotation_deg * kDeg)};
}
Point2 ShapeFrame::minor() const {
  return {std::cos(rotation_deg * kDeg), std::sin(rotation_deg * kDeg)};
}
Point2 ShapeFrame::to_local(Point2 p) const {
  const Point2 d = p - center;
  return {dot(d, minor()), dot(d, major())};
}
Point2 ShapeFrame::to_image(Point2 local) const {
  return center + minor() * local.x + major() * local.y;
}

bool inside_ellipse(const EllipseParams& p, Point2 pt) {
  const Point2 l = p.frame.to_local(pt);
  const double u = l.x / p.semi_minor, v = l.y / p.semi_major;
  return u * u + v * v <= 1.0;
}

double ellipse_chord(const EllipseParams& p, double offset) {
  const double t = offset / p.semi_major;
  if (std::abs(t) >= 1.0) return 0.0;
  return 2.0 * p.semi_minor * std::sqrt(1.0 - t * t);
}

namespace {
struct Lens {
  double rho, d, half;
};
Lens lens_of(const TeardropParams& p) {
  const double beta = p.apex_angle_deg * kDeg / 2.0;
  const double half = p.length / 2.0;
  const double rho = half / std::sin(beta);
  return {rho, rho * std::cos(beta), half};
}
}  // namespace

bool inside_teardrop(const TeardropParams& p, Point2 pt) {
  const Lens lens = lens_of(p);
  const Point2 l = p.frame.to_local(pt);
  const double r2 = lens.rho * lens.rho;
  const double a = l.x - lens.d, b = l.x + lens.d;
  return a * a + l.y * l.y <= r2 && b * b + l.y * l.y <= r2;
}

double teardrop_chord(const TeardropParams& p, double offset) {
  const Lens lens = lens_of(p);
  if (std::abs(offset) >= lens.half) return 0.0;
  return 2.0 * (std::sqrt(lens.rho * lens.rho - offset * offset) - lens.d);
}

MaskSample gen_ellipse_mask(const EllipseParams& p) {
  require(p.width > 0 && p.height > 0, "image size must be positive");
  require(p.semi_minor > 0.0 && p.semi_major > 0.0, "ellipse semi-axes must be positive");
  MaskSample out;
  out.mask = rasterize(p.width, p.height, [&](Point2 q) { return inside_ellipse(p, q); });
  out.area = kPi * p.semi_minor * p.semi_major;
  out.midline_deg = direction_deg(p.frame.major());
  nlohmann::json chords = nlohmann::json::array();
  for (int k = 1; k < 10; ++k) {
    const double t = p.semi_major * k / 10.0;
    chords.push_back({{"offset", t}, {"width", ellipse_chord(p, t)}});
  }
  out.truth = {{"kind", "ellipse_mask"},
               {"center", point_json(p.frame.center)},
               {"rotation_deg", p.frame.rotation_deg},
               {"semi_minor", p.semi_minor},
               {"semi_major", p.semi_major},
               {"midline_deg", out.midline_deg},
               {"area", out.area},
               {"chords", chords}};
  return out;
}

MaskSample gen_teardrop_mask(const TeardropParams& p) {
  require(p.width > 0 && p.height > 0, "image size must be positive");
  require(p.length > 0.0, "teardrop length must be positive");
  require(p.apex_angle_deg > 0.0 && p.apex_angle_deg < 180.0,
          "apex angle must lie in (0, 180) degrees");
  const Lens lens = lens_of(p);
  MaskSample out;
  out.mask = rasterize(p.width, p.height, [&](Point2 q) { return inside_teardrop(p, q); });
  const double beta = p.apex_angle_deg * kDeg / 2.0;
  out.area = 2.0 * (lens.rho * lens.rho * beta - lens.d * lens.half);
  out.midline_deg = direction_deg(p.frame.major());
  nlohmann::json chords = nlohmann::json::array();
  for (int k = 1; k < 10; ++k) {
    const double t = lens.half * k / 10.0;
    chords.push_back({{"offset", t}, {"width", teardrop_chord(p, t)}});
  }
  out.truth = {{"kind", "teardrop_mask"},
               {"center", point_json(p.frame.center)},
               {"rotation_deg", p.frame.rotation_deg},
               {"length", p.length},
               {"apex_angle_deg", p.apex_angle_deg},
               {"half_angle_deg", p.apex_angle_deg / 2.0},
               {"bottom_apex", point_json(p.frame.to_image({0.0, lens.half}))},
               {"midline_deg", out.midline_deg},
               {"area", out.area},
               {"chords", chords}};
  return out;
}

OscSample gen_osc_sequence(const OscParams& p, std::uint64_t seed) {
  require(p.width > 0 && p.height > 0, "image size must be positive");
  require(p.bottom_y > p.top_y, "bottom_y must exceed top_y");
  require(p.fps > 0.0 && p.frames > 0, "fps and frames must be positive");
  require(p.amp_left >= 0.0 && p.amp_right >= 0.0 && p.noise_px >= 0.0,
          "amplitudes and noise must be non-negative");
  require(p.base_open > std::max(p.amp_left, p.amp_right) + 3.0 * p.noise_px,
          "base_open must exceed the largest excursion");

  SplitMix64 rng(seed);
  const double phase_l = p.phase_left.value_or(rng.uniform(0.0, 2.0 * kPi));
  const double phase_r = p.phase_right.value_or(rng.uniform(0.0, 2.0 * kPi));

  OscSample out;
  out.seq.fps = p.fps;
  out.seq.masks.reserve(p.frames);
  const double span = p.bottom_y - p.top_y;
  std::vector<double> open_l(p.frames), open_r(p.frames);
  for (std::size_t t = 0; t < p.frames; ++t) {
    const double w = 2.0 * kPi * p.freq_hz * static_cast<double>(t) / p.fps;
    open_l[t] = p.base_open + p.amp_left * std::sin(w + phase_l) + p.noise_px * rng.normal();
    open_r[t] = p.base_open + p.amp_right * std::sin(w + phase_r) + p.noise_px * rng.normal();
    const double ol = open_l[t], orr = open_r[t];
    out.seq.masks.push_back(rasterize(p.width, p.height, [&](Point2 q) {
      const double u = (q.y - p.top_y) / span;
      if (u < 0.0 || u > 1.0) return false;
      const double prof = 2.0 * std::sqrt(u * (1.0 - u));
      return q.x >= p.cx - ol * prof && q.x <= p.cx + orr * prof;
    }));
    out.area.push_back((ol + orr) * span * kPi / 4.0);
  }
  if (p.amp_left < p.amp_right) {
    out.paralyzed = uvfp::Side::Left;
  } else if (p.amp_right < p.amp_left) {
    out.paralyzed = uvfp::Side::Right;
  }
  out.truth = {{"kind", "osc_sequence"},
               {"fps", p.fps},
               {"frames", p.frames},
               {"amp_left", p.amp_left},
               {"amp_right", p.amp_right},
               {"phase_left", phase_l},
               {"phase_right", phase_r},
               {"freq_hz", p.freq_hz},
               {"paralyzed", uvfp::to_string(out.paralyzed)},
               {"midline_deg", 90.0},
               {"area", out.area}};
  return out;
}

std::size_t StrobeParams::total_frames() const {
  return steady1_frames + gap1_frames + strobe_frames + gap2_frames + steady2_frames;
}

StrobeParams StrobeParams::randomized(std::uint64_t seed) {
  SplitMix64 rng(seed);
  StrobeParams p;
  p.steady1_frames = 30 + rng.below(61);
  p.gap1_frames = 3 + rng.below(10);
  p.strobe_frames = 60 + rng.below(141);
  p.gap2_frames = 3 + rng.below(10);
  p.steady2_frames = 30 + rng.below(61);
  p.base_v = rng.uniform(0.35, 0.75);
  p.delta_v = rng.uniform(0.05, 0.2);
  p.ramp_v = rng.uniform(0.0, 0.15);
  return p;
}

TimeSegment StrobeSample::part_segment(std::size_t i) const {
  return {parts[i].first / video.fps, parts[i].second / video.fps};
}

StrobeSample gen_strobe_video(const StrobeParams& p, std::uint64_t seed) {
  require(p.width > 0 && p.height > 0 && p.fps > 0.0, "size and fps must be positive");
  require(p.gap1_frames >= 3 && p.gap2_frames >= 3, "black gaps need at least 3 frames");
  require(p.steady1_frames >= 3 && p.strobe_frames >= 3 && p.steady2_frames >= 3,
          "segments need at least 3 frames");
  require(p.base_v - p.delta_v >= 0.1 && p.base_v + std::max(p.delta_v, p.ramp_v) <= 1.0,
          "brightness levels must stay within [0.1, 1]");

  SplitMix64 rng(seed);
  const std::size_t pixels = static_cast<std::size_t>(p.width) * p.height;
  std::vector<double> texture(pixels);
  for (auto& t : texture) t = rng.uniform(0.85, 1.0);
  const double tint_g = rng.uniform(0.5, 0.65), tint_b = rng.uniform(0.4, 0.55);

  StrobeSample out;
  out.video.fps = p.fps;
  const std::size_t sizes[] = {p.steady1_frames, p.gap1_frames, p.strobe_frames, p.gap2_frames,
                               p.steady2_frames};
  std::size_t at = 0;
  for (auto n : sizes) {
    out.parts.emplace_back(at, at + n);
    at += n;
  }

  auto frame_at = [&](double level) {
    video::RgbFrame f{p.width, p.height, std::vector<std::uint8_t>(pixels * 3)};
    for (std::size_t i = 0; i < pixels; ++i) {
      const double v = 255.0 * level * texture[i];
      f.rgb[3 * i] = static_cast<std::uint8_t>(std::lround(v));
      f.rgb[3 * i + 1] = static_cast<std::uint8_t>(std::lround(v * tint_g));
      f.rgb[3 * i + 2] = static_cast<std::uint8_t>(std::lround(v * tint_b));
    }
    return f;
  };
  for (std::size_t part = 0; part < 5; ++part) {
    const auto [lo, hi] = out.parts[part];
    for (std::size_t t = lo; t < hi; ++t) {
      const std::size_t i = t - lo;
      double level = 0.0;
      switch (part) {
        case 0: level = p.base_v + p.ramp_v * static_cast<double>(i) / (hi - lo - 1); break;
        case 2: level = p.base_v + (i % 2 == 0 ? p.delta_v : -p.delta_v); break;
        case 4: level = p.base_v; break;
        default: level = 0.0; break;
      }
      out.video.frames.push_back(frame_at(level));
    }
  }

  nlohmann::json parts = nlohmann::json::array();
  const char* names[] = {"steady", "gap", "strobe", "gap", "steady"};
  for (std::size_t i = 0; i < 5; ++i) {
    parts.push_back({{"name", names[i]},
                     {"first_frame", out.parts[i].first},
                     {"end_frame", out.parts[i].second},
                     {"start_s", out.part_segment(i).start_s},
                     {"end_s", out.part_segment(i).end_s}});
  }
  out.truth = {{"kind", "strobe_video"},
               {"fps", p.fps},
               {"frames", p.total_frames()},
               {"parts", parts},
               {"strobe_part", out.strobe_part},
               {"strobe_nonempty_index", 1},
               {"strobe", {{"start_s", out.part_segment(2).start_s},
                           {"end_s", out.part_segment(2).end_s}}}};
  return out;
}

VowelSample gen_vowel_audio(const VowelParams& p, std::uint64_t seed) {
  require(p.sample_rate > 0.0 && p.duration_s >= 0.0, "sample rate and duration must be valid");
  require(p.harmonics >= 1 && p.f0 > 0.0, "need f0 > 0 and at least one harmonic");
  require(p.f0 * p.harmonics < p.sample_rate / 2.0, "harmonics exceed Nyquist");
  require(p.tone_rms >= 0.0, "tone_rms must be non-negative");
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    const auto& s = p.segments[i];
    require(s.start_s >= 0.0 && s.end_s > s.start_s && s.end_s <= p.duration_s + 1e-9,
            "vowel segments must lie inside the clip");
    require(i == 0 || s.start_s >= p.segments[i - 1].end_s, "vowel segments must be sorted");
  }

  SplitMix64 rng(seed);
  std::vector<double> phases(p.harmonics);
  double power = 0.0;
  for (int h = 1; h <= p.harmonics; ++h) {
    phases[h - 1] = rng.uniform(0.0, 2.0 * kPi);
    power += 0.5 / (h * h);
  }
  const double gain = p.tone_rms / std::sqrt(power);
  const double noise_rms = p.snr_db ? p.tone_rms / std::pow(10.0, *p.snr_db / 20.0) : 0.0;

  const auto n = static_cast<std::size_t>(std::llround(p.duration_s * p.sample_rate));
  VowelSample out;
  out.clip.sample_rate = p.sample_rate;
  out.clip.samples.assign(n, 0.0);
  out.segments = p.segments;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / p.sample_rate;
    double s = 0.0;
    const bool gated = std::any_of(p.segments.begin(), p.segments.end(), [&](const TimeSegment& g) {
      return t >= g.start_s && t < g.end_s;
    });
    if (gated) {
      for (int h = 1; h <= p.harmonics; ++h)
        s += std::sin(2.0 * kPi * p.f0 * h * t + phases[h - 1]) / h;
      s *= gain;
    }
    if (noise_rms > 0.0) s += noise_rms * rng.normal();
    out.clip.samples[i] = std::clamp(s, -1.0, 1.0);
  }
  out.truth = {{"kind", "vowel_audio"},
               {"sample_rate", p.sample_rate},
               {"duration_s", p.duration_s},
               {"f0", p.f0},
               {"harmonics", p.harmonics},
               {"tone_rms", p.tone_rms},
               {"snr_db", p.snr_db ? nlohmann::json(*p.snr_db) : nlohmann::json(nullptr)},
               {"segments", segments_json(p.segments)}};
  return out;
}

ExamSample gen_exam(const ExamParams& p, std::uint64_t seed) {
  require(p.amp_ratio >= 1.0 && p.amp_active > 0.0, "amplitudes must be positive, ratio >= 1");
  SplitMix64 master(seed);
  const std::uint64_t video_seed = master.next(), audio_seed = master.next(),
                      det_seed = master.next(), mask_seed = master.next();

  ExamSample out;
  out.strobe = gen_strobe_video(p.video, video_seed);
  const double fps = p.video.fps;
  const std::size_t frames = p.video.total_frames();
  const double total_s = frames / fps;

  VowelParams vp;
  vp.duration_s = total_s;
  vp.segments = p.vowels;
  vp.snr_db = p.snr_db;
  out.audio = gen_vowel_audio(vp, audio_seed);

  const TimeSegment presence_seg[] = {p.presence};
  const FrameMask presence = segments_to_frames(presence_seg, fps, frames);
  SplitMix64 det_rng(det_seed);
  for (std::size_t i = 0; i < frames; ++i)
    out.detections.push_back(presence.flags[i] ? det_rng.uniform(0.7, 0.99)
                                               : det_rng.uniform(0.01, 0.3));

  SplitMix64 mask_rng(mask_seed);
  out.paralyzed = p.paralyzed.value_or(mask_rng.below(2) == 0 ? uvfp::Side::Left
                                                              : uvfp::Side::Right);
  OscParams op;
  op.width = p.mask_width;
  op.height = p.mask_height;
  op.cx = std::round(p.mask_width / 2.0);
  op.top_y = std::round(0.12 * p.mask_height);
  op.bottom_y = std::round(0.88 * p.mask_height);
  op.base_open = 1.6 * p.amp_active;
  const double weak = p.amp_active / p.amp_ratio;
  op.amp_left = out.paralyzed == uvfp::Side::Left ? weak : p.amp_active;
  op.amp_right = out.paralyzed == uvfp::Side::Right ? weak : p.amp_active;
  op.fps = fps;
  op.frames = frames;
  op.noise_px = 0.2;
  auto osc = gen_osc_sequence(op, mask_rng.next());
  out.masks = std::move(osc.seq);
  for (std::size_t i = 0; i < frames; ++i)
    if (!presence.flags[i]) out.masks.masks[i] = GlottisMask(p.mask_width, p.mask_height);

  std::vector<TimeSegment> truth_highlights;
  for (const auto& s : intersect_segments(normalize_segments(p.vowels), frames_to_segments(presence)))
    if (s.duration() >= 0.5) truth_highlights.push_back(s);
  out.highlights = truth_highlights;

  out.truth = {{"kind", "exam_bundle"},
               {"fps", fps},
               {"frames", frames},
               {"duration_s", total_s},
               {"vowels", segments_json(p.vowels)},
               {"presence", {{"start_s", p.presence.start_s}, {"end_s", p.presence.end_s}}},
               {"highlights", segments_json(truth_highlights)},
               {"paralyzed", uvfp::to_string(out.paralyzed)},
               {"strobe", out.strobe.truth},
               {"amp_left", op.amp_left},
               {"amp_right", op.amp_right}};
  return out;
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::EllipseMask: return "ellipse_mask";
    case SynthKind::TeardropMask: return "teardrop_mask";
    case SynthKind::OscSequence: return "osc_sequence";
    case SynthKind::StrobeVideo: return "strobe_video";
    case SynthKind::VowelAudio: return "vowel_audio";
    case SynthKind::ExamBundle: return "exam_bundle";
  }
  return "ellipse_mask";
}

SynthKind kind_from_string(const std::string& text) {
  for (auto k : {SynthKind::EllipseMask, SynthKind::TeardropMask, SynthKind::OscSequence,
                 SynthKind::StrobeVideo, SynthKind::VowelAudio, SynthKind::ExamBundle})
    if (to_string(k) == text) return k;
  throw Error(ErrorCode::BadParams, "unknown synth kind '" + text + "'");
}

SynthSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadParams, "synth spec must be a JSON object");
  SynthSpec s;
  try {
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    s.params = j.value("params", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParams, e.what());
  }
  if (!s.params.is_object()) throw Error(ErrorCode::BadParams, "params must be an object");
  return s;
}

namespace {

ShapeFrame frame_from(const nlohmann::json& j, ShapeFrame f) {
  if (j.contains("center")) f.center = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
  f.rotation_deg = j.value("rotation_deg", f.rotation_deg);
  return f;
}

EllipseParams ellipse_from(const nlohmann::json& j) {
  EllipseParams p;
  p.width = j.value("width", p.width);
  p.height = j.value("height", p.height);
  p.frame = frame_from(j, p.frame);
  p.semi_minor = j.value("semi_minor", p.semi_minor);
  p.semi_major = j.value("semi_major", p.semi_major);
  return p;
}

TeardropParams teardrop_from(const nlohmann::json& j) {
  TeardropParams p;
  p.width = j.value("width", p.width);
  p.height = j.value("height", p.height);
  p.frame = frame_from(j, p.frame);
  p.length = j.value("length", p.length);
  p.apex_angle_deg = j.value("apex_angle_deg", p.apex_angle_deg);
  return p;
}

OscParams osc_from(const nlohmann::json& j) {
  OscParams p;
  p.width = j.value("width", p.width);
  p.height = j.value("height", p.height);
  p.cx = j.value("cx", p.cx);
  p.top_y = j.value("top_y", p.top_y);
  p.bottom_y = j.value("bottom_y", p.bottom_y);
  p.base_open = j.value("base_open", p.base_open);
  p.amp_left = j.value("amp_left", p.amp_left);
  p.amp_right = j.value("amp_right", p.amp_right);
  p.freq_hz = j.value("freq_hz", p.freq_hz);
  p.fps = j.value("fps", p.fps);
  p.frames = j.value("frames", p.frames);
  if (j.contains("phase_left")) p.phase_left = j["phase_left"].get<double>();
  if (j.contains("phase_right")) p.phase_right = j["phase_right"].get<double>();
  p.noise_px = j.value("noise_px", p.noise_px);
  return p;
}

StrobeParams strobe_from(const nlohmann::json& j, std::uint64_t seed) {
  StrobeParams p = j.value("randomize", false) ? StrobeParams::randomized(seed) : StrobeParams{};
  p.width = j.value("width", p.width);
  p.height = j.value("height", p.height);
  p.fps = j.value("fps", p.fps);
  p.steady1_frames = j.value("steady1_frames", p.steady1_frames);
  p.gap1_frames = j.value("gap1_frames", p.gap1_frames);
  p.strobe_frames = j.value("strobe_frames", p.strobe_frames);
  p.gap2_frames = j.value("gap2_frames", p.gap2_frames);
  p.steady2_frames = j.value("steady2_frames", p.steady2_frames);
  p.base_v = j.value("base_v", p.base_v);
  p.delta_v = j.value("delta_v", p.delta_v);
  p.ramp_v = j.value("ramp_v", p.ramp_v);
  return p;
}

std::vector<TimeSegment> segments_from(const nlohmann::json& arr) {
  std::vector<TimeSegment> out;
  for (const auto& s : arr) {
    if (s.is_array()) {
      out.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    } else {
      out.push_back({s.at("start_s").get<double>(), s.at("end_s").get<double>()});
    }
  }
  return out;
}

VowelParams vowel_from(const nlohmann::json& j) {
  VowelParams p;
  p.sample_rate = j.value("sample_rate", p.sample_rate);
  p.duration_s = j.value("duration_s", p.duration_s);
  if (j.contains("segments")) p.segments = segments_from(j["segments"]);
  p.f0 = j.value("f0", p.f0);
  p.harmonics = j.value("harmonics", p.harmonics);
  p.tone_rms = j.value("tone_rms", p.tone_rms);
  if (j.contains("snr_db")) {
    if (j["snr_db"].is_null()) {
      p.snr_db.reset();
    } else {
      p.snr_db = j["snr_db"].get<double>();
    }
  }
  return p;
}

ExamParams exam_from(const nlohmann::json& j, std::uint64_t seed) {
  ExamParams p;
  if (j.contains("video")) p.video = strobe_from(j["video"], seed);
  if (j.contains("vowels")) p.vowels = segments_from(j["vowels"]);
  if (j.contains("presence")) p.presence = segments_from(nlohmann::json::array({j["presence"]})).front();
  p.snr_db = j.value("snr_db", p.snr_db);
  p.amp_active = j.value("amp_active", p.amp_active);
  p.amp_ratio = j.value("amp_ratio", p.amp_ratio);
  if (j.contains("paralyzed")) {
    const auto side = j["paralyzed"].get<std::string>();
    if (side == "Left") {
      p.paralyzed = uvfp::Side::Left;
    } else if (side == "Right") {
      p.paralyzed = uvfp::Side::Right;
    } else {
      throw Error(ErrorCode::BadParams, "paralyzed must be Left or Right");
    }
  }
  p.mask_width = j.value("mask_width", p.mask_width);
  p.mask_height = j.value("mask_height", p.mask_height);
  return p;
}

void write_single_mask(const std::filesystem::path& out_dir, const GlottisMask& mask) {
  save_mask(out_dir / "mask.png", mask);
  MaskSequence seq{25.0, {mask}};
  save_mask_dir(out_dir / "masks", seq);
}

std::string detections_csv(const std::vector<double>& conf) {
  std::ostringstream os;
  os << "frame,confidence\n";
  for (std::size_t i = 0; i < conf.size(); ++i) os << i << ',' << format_double(conf[i]) << '\n';
  return os.str();
}

}  // namespace

nlohmann::json write_bundle(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::WriteFailure, out_dir.string() + ": " + ec.message());
  // a default-constructed spec carries null params
  const nlohmann::json params = spec.params.is_null() ? nlohmann::json::object() : spec.params;
  nlohmann::json truth;
  try {
    switch (spec.kind) {
      case SynthKind::EllipseMask: {
        auto s = gen_ellipse_mask(ellipse_from(params));
        write_single_mask(out_dir, s.mask);
        truth = s.truth;
        break;
      }
      case SynthKind::TeardropMask: {
        auto s = gen_teardrop_mask(teardrop_from(params));
        write_single_mask(out_dir, s.mask);
        truth = s.truth;
        break;
      }
      case SynthKind::OscSequence: {
        auto s = gen_osc_sequence(osc_from(params), spec.seed);
        save_mask_dir(out_dir / "masks", s.seq);
        truth = s.truth;
        break;
      }
      case SynthKind::StrobeVideo: {
        auto s = gen_strobe_video(strobe_from(params, spec.seed), spec.seed);
        video::save_frames(out_dir / "frames", s.video);
        truth = s.truth;
        break;
      }
      case SynthKind::VowelAudio: {
        auto s = gen_vowel_audio(vowel_from(params), spec.seed);
        write_wav(out_dir / "audio.wav", s.clip.samples, s.clip.sample_rate);
        truth = s.truth;
        break;
      }
      case SynthKind::ExamBundle: {
        auto s = gen_exam(exam_from(params, spec.seed), spec.seed);
        write_wav(out_dir / "audio.wav", s.audio.clip.samples, s.audio.clip.sample_rate);
        video::save_frames(out_dir / "frames", s.strobe.video);
        save_mask_dir(out_dir / "masks", s.masks);
        write_text(out_dir / "detections.csv", detections_csv(s.detections));
        truth = s.truth;
        break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParams, e.what());
  }
  truth["seed"] = spec.seed;
  write_json(out_dir / "ground_truth.json", truth);
  return truth;
}

}  // namespace laryngo::synth

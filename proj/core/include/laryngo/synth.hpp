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

// Deterministic synthetic data with analytic ground truth. Shapes are
// rasterized by testing each pixel centre against the analytic region, with
// no anti-aliasing. All randomness comes from SplitMix64, so a spec and seed
// give bit-identical output on every platform.

#ifndef LARYNGO_SYNTH_HPP_
#define LARYNGO_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "laryngo/audio.hpp"
#include "laryngo/mask_tools.hpp"
#include "laryngo/model.hpp"
#include "laryngo/uvfp.hpp"
#include "laryngo/video.hpp"

namespace laryngo::synth {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then
/// the variant-13 finalizer. Doubles take the top 53 bits; normals use
/// Box-Muller with no cached second value.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();                         // N(0, 1)
  std::uint64_t below(std::uint64_t n);    // [0, n)

 private:
  std::uint64_t state_;
};

/// Shape frame: `major` points along the shape's long axis (image +y when
/// rotation_deg = 0), `minor` across it. Positive rotation turns +y toward -x.
struct ShapeFrame {
  Point2 center;
  double rotation_deg = 0.0;

  Point2 major() const;
  Point2 minor() const;
  /// (minor, major) coordinates of an image point.
  Point2 to_local(Point2 p) const;
  Point2 to_image(Point2 local) const;
};

struct EllipseParams {
  int width = 160;
  int height = 200;
  ShapeFrame frame{{80.0, 100.0}, 0.0};
  double semi_minor = 20.0;
  double semi_major = 60.0;
};

/// Lens bounded by two circular arcs meeting at apices on the major axis.
struct TeardropParams {
  int width = 160;
  int height = 200;
  ShapeFrame frame{{80.0, 100.0}, 0.0};
  double length = 120.0;         // apex to apex
  double apex_angle_deg = 40.0;  // full angle between the arcs at an apex
};

struct MaskSample {
  GlottisMask mask;
  nlohmann::json truth;
  double midline_deg = 0.0;  // major axis direction, degrees from +x
  double area = 0.0;         // analytic
};

bool inside_ellipse(const EllipseParams& p, Point2 pt);
bool inside_teardrop(const TeardropParams& p, Point2 pt);
double ellipse_chord(const EllipseParams& p, double offset);
double teardrop_chord(const TeardropParams& p, double offset);

MaskSample gen_ellipse_mask(const EllipseParams& p);
MaskSample gen_teardrop_mask(const TeardropParams& p);

/// Glottis whose left and right boundaries open and close sinusoidally.
/// Opening of a side at frame t: base_open + amp * sin(2 pi f t / fps + phase)
/// + N(0, noise_px); the boundary sits at that opening times 2 sqrt(u (1 - u)),
/// with u in [0, 1] running from the top to the bottom apex. Both boundaries
/// are inclusive and the apices are single pixels when cx, top_y and bottom_y
/// are integers, so equal openings give a mirror-symmetric mask.
struct OscParams {
  int width = 128;
  int height = 160;
  double cx = 64.0;
  double top_y = 20.0;
  double bottom_y = 140.0;
  double base_open = 14.0;
  double amp_left = 0.0;
  double amp_right = 8.0;
  double freq_hz = 3.0;
  double fps = 25.0;
  std::size_t frames = 100;
  std::optional<double> phase_left;   // random when unset
  std::optional<double> phase_right;
  double noise_px = 0.0;
};

struct OscSample {
  MaskSequence seq;
  std::vector<double> area;  // analytic per frame
  uvfp::Side paralyzed = uvfp::Side::Indeterminate;
  nlohmann::json truth;
};

OscSample gen_osc_sequence(const OscParams& p, std::uint64_t seed);

/// steady | black gap | strobing | black gap | steady
struct StrobeParams {
  int width = 32;
  int height = 24;
  double fps = 25.0;
  std::size_t steady1_frames = 60;
  std::size_t gap1_frames = 6;
  std::size_t strobe_frames = 120;
  std::size_t gap2_frames = 6;
  std::size_t steady2_frames = 60;
  double base_v = 0.6;
  double delta_v = 0.15;
  double ramp_v = 0.1;  // total brightness drift across the first steady part

  /// Lengths and levels drawn from fixed ranges.
  static StrobeParams randomized(std::uint64_t seed);
  std::size_t total_frames() const;
};

struct StrobeSample {
  video::FrameSeries video;
  std::vector<std::pair<std::size_t, std::size_t>> parts;  // 5 frame ranges
  std::size_t strobe_part = 2;
  nlohmann::json truth;

  TimeSegment part_segment(std::size_t i) const;
};

StrobeSample gen_strobe_video(const StrobeParams& p, std::uint64_t seed);

/// Harmonic complex (amplitudes 1/h, random phases) gated to `segments`, plus
/// white noise over the whole clip at `snr_db` below the tone RMS.
struct VowelParams {
  double sample_rate = 16000.0;
  double duration_s = 6.0;
  std::vector<TimeSegment> segments{{1.0, 3.0}, {4.0, 6.0}};
  double f0 = 200.0;
  int harmonics = 5;
  double tone_rms = 0.1;
  std::optional<double> snr_db = 10.0;  // unset: no noise
};

struct VowelSample {
  audio::AudioClip clip;
  std::vector<TimeSegment> segments;
  nlohmann::json truth;
};

VowelSample gen_vowel_audio(const VowelParams& p, std::uint64_t seed);

/// Complete examination: strobe video, vowel audio, fold detections and a
/// mask sequence with one paralysed fold, all on one timeline.
struct ExamParams {
  StrobeParams video{32, 24, 25.0, 75, 10, 250, 10, 75, 0.6, 0.15, 0.1};
  std::vector<TimeSegment> vowels{{4.0, 7.5}, {9.0, 12.5}};
  TimeSegment presence{4.6, 13.0};
  double snr_db = 10.0;
  double amp_active = 8.0;
  double amp_ratio = 5.0;
  std::optional<uvfp::Side> paralyzed;  // random when unset
  int mask_width = 96;
  int mask_height = 128;
};

struct ExamSample {
  StrobeSample strobe;
  VowelSample audio;
  std::vector<double> detections;  // confidence per video frame
  MaskSequence masks;
  std::vector<TimeSegment> highlights;
  uvfp::Side paralyzed = uvfp::Side::Indeterminate;
  nlohmann::json truth;
};

ExamSample gen_exam(const ExamParams& p, std::uint64_t seed);

enum class SynthKind { EllipseMask, TeardropMask, OscSequence, StrobeVideo, VowelAudio, ExamBundle };

std::string to_string(SynthKind kind);
SynthKind kind_from_string(const std::string& text);

/// {"kind": "...", "seed": n, "params": {...}}
struct SynthSpec {
  std::uint64_t seed = 0;
  SynthKind kind = SynthKind::EllipseMask;
  nlohmann::json params = nlohmann::json::object();
};

SynthSpec spec_from_json(const nlohmann::json& j);

/// Generates the artifact and writes it with `ground_truth.json` into
/// `out_dir` using the ingestion formats. Returns the ground truth.
nlohmann::json write_bundle(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace laryngo::synth

#endif  // LARYNGO_SYNTH_HPP_

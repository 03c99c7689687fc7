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

// Angle-deviation extraction for a single glottis mask and the per-fold
// angle series (VFDyn) over a mask sequence.
//
// Per frame:
//   1. extreme vertices U (top), D (bottom), L (left), R (right)
//   2. centre C = mean of the vertices, midline C -> D
//   3. N-1 equidistant points C_k on the part of C -> D inside the mask, and
//      the boundary hits L_k / R_k of the perpendicular through each C_k
//   4. rotate so the midline points down (+y), least-squares parabola through
//      all L_k / R_k, vertex D_q mapped back
//   5. corrected midline C -> D_q, exit point D' on the mask boundary
//   6. angles L_k D' C and C D' R_k
//
// Lines are kept as point + unit direction, so vertical midlines need no
// special case. Boundary hits come from marching at `ray_step` pixels and
// keeping the last in-mask sample.

#ifndef LARYNGO_FOLD_GEOMETRY_HPP_
#define LARYNGO_FOLD_GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "laryngo/mask_tools.hpp"
#include "laryngo/model.hpp"

namespace laryngo::geometry {

struct GeometryConfig {
  std::size_t n_levels = 10;  // N; levels k = 1..N-1
  double ray_step = 0.5;
  std::size_t min_area = 20;
  double fit_eps = 1e-6;

  void validate() const;
};

void to_json(nlohmann::json& j, const GeometryConfig& cfg);
void from_json(const nlohmann::json& j, GeometryConfig& cfg);

struct Vertices {
  Point2 top, bottom, left, right;  // U, D, L, R
};

/// Throws MaskTooSmall when area < min_area.
Vertices extract_vertices(const GlottisMask& mask, std::size_t min_area = 20);

struct Midline {
  Point2 center;  // C
  Point2 axis;    // unit vector C -> D
};

/// Throws DegenerateMidline when |C - D| < 1 px.
Midline midline(const Vertices& v);

/// Last in-mask sample walking from `origin` along `dir` in `step` increments.
/// Samples before the walk first enters the mask are skipped; the walk stops
/// at the first miss after that or at the image border.
std::optional<Point2> march_to_boundary(const GlottisMask& mask, Point2 origin, Point2 dir,
                                        double step);

struct Level {
  std::size_t k = 0;
  Point2 center;  // C_k
  Point2 left;    // L_k
  Point2 right;   // R_k
  bool valid = false;  // false when C_k falls outside the mask
};

struct Chord {
  Point2 start;
  Point2 end;
};

/// First and last in-mask samples of the segment start -> end, sampled at
/// `step` from `start` (the end point itself is always sampled).
std::optional<Chord> clip_line(const GlottisMask& mask, Point2 start, Point2 end, double step);

/// N-1 equidistant levels on the part of C -> D inside the mask. L_k lies on
/// the side where cross(axis, C_k -> P) > 0.
std::vector<Level> level_points(const GlottisMask& mask, const Midline& line, Point2 bottom,
                                const GeometryConfig& cfg);

struct QuadraticFit {
  double a = 0.0, b = 0.0, c = 0.0;  // y = a x^2 + b x + c
  double residual_rms = 0.0;
  bool ok = false;
};

/// Least squares via Householder QR on [x^2, x, 1]. `ok` is false when the
/// design matrix is rank deficient or |a| < fit_eps.
QuadraticFit fit_quadratic(std::span<const Point2> points, double fit_eps);

/// Rotates `p` about `pivot` by `radians` (counter-clockwise in a y-up frame).
Point2 rotate_about(Point2 p, Point2 pivot, double radians);

struct Correction {
  double gamma_deg = 0.0;     // rotation taking the midline onto +y
  QuadraticFit fit;
  Point2 d_q;                 // parabola vertex, original frame
  Point2 d_prime;             // exit of the corrected midline
  bool fit_degenerate = false;
};

/// Needs >= 3 usable points; otherwise, or when the fit is degenerate, falls
/// back to D_q = D and D' along the original midline.
Correction quadratic_correction(const GlottisMask& mask, std::span<const Level> levels,
                                const Midline& line, Point2 bottom,
                                const GeometryConfig& cfg);

/// Angle at `vertex` between rays to `a` and `b`, in degrees.
double angle_at(Point2 vertex, Point2 a, Point2 b);

/// Left/right angles per level (NaN for invalid levels). Throws
/// CoincidentPoints when D' coincides with C or with a boundary point.
AngleSet glottal_angles(std::span<const Level> levels, Point2 center, Point2 d_prime);

struct FoldGeometry {
  Vertices vertices;
  Point2 center;
  Point2 axis;
  std::vector<Level> levels;
  Correction correction;
  AngleSet angles;
  std::optional<std::string> degenerate;  // reason, when no angles were produced

  bool ok() const { return !degenerate.has_value(); }
  /// Direction of the corrected midline C -> D', in degrees from +x
  /// (image frame, y down).
  double corrected_midline_deg() const;
};

/// Never throws for data problems; degeneracies are reported in the result.
FoldGeometry analyze_frame(const GlottisMask& mask, const GeometryConfig& cfg);

nlohmann::json to_json(const FoldGeometry& g);

struct VFDynSeries {
  std::vector<SeriesChannel> left;   // L1..L{N-1}
  std::vector<SeriesChannel> right;  // R1..R{N-1}
  std::vector<bool> frame_validity;

  std::size_t frames() const { return frame_validity.size(); }
  std::size_t n_levels() const { return left.size() + 1; }
  std::size_t valid_frames() const;
};

struct VFDynResult {
  VFDynSeries series;
  std::vector<FoldGeometry> frames;
};

/// Frames are analysed independently; a frame with any missing level is
/// invalid and holds the previous valid values (leading invalid frames take
/// the first valid ones). Throws AllFramesDegenerate.
VFDynResult vfdyn(const MaskSequence& seq, const GeometryConfig& cfg);

/// Columns L1.., R1.., then optional extras, then `valid` (0/1).
std::string vfdyn_to_csv(const VFDynSeries& series, std::span<const SeriesChannel> extras = {});
/// Reads the columns written by vfdyn_to_csv; extra columns are ignored.
VFDynSeries vfdyn_from_csv(const std::string& text);

}  // namespace laryngo::geometry

#endif  // LARYNGO_FOLD_GEOMETRY_HPP_

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


#include "laryngo/fold_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"
#include "parallel.hpp"

namespace laryngo::geometry {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kCoincident = 1e-9;

Point2 normalized(Point2 p) {
  const double n = norm(p);
  return {p.x / n, p.y / n};
}

// Samples needed to cross the whole image from any interior point.
std::size_t max_steps(const GlottisMask& mask, double step) {
  return static_cast<std::size_t>(std::ceil((mask.width() + mask.height() + 2.0) / step)) + 1;
}

bool inside_image(const GlottisMask& mask, Point2 p) {
  return p.x >= -0.5 && p.y >= -0.5 && p.x < mask.width() - 0.5 && p.y < mask.height() - 0.5;
}

nlohmann::json point_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace

void GeometryConfig::validate() const {
  if (n_levels < 2) throw Error(ErrorCode::BadConfig, "n_levels must be >= 2");
  if (!(ray_step > 0.0)) throw Error(ErrorCode::BadConfig, "ray_step must be > 0");
  if (!(fit_eps >= 0.0)) throw Error(ErrorCode::BadConfig, "fit_eps must be >= 0");
}

void to_json(nlohmann::json& j, const GeometryConfig& c) {
  j = {{"n_levels", c.n_levels},
       {"ray_step", c.ray_step},
       {"min_area", c.min_area},
       {"fit_eps", c.fit_eps}};
}

void from_json(const nlohmann::json& j, GeometryConfig& c) {
  c.n_levels = j.value("n_levels", c.n_levels);
  c.ray_step = j.value("ray_step", c.ray_step);
  c.min_area = j.value("min_area", c.min_area);
  c.fit_eps = j.value("fit_eps", c.fit_eps);
}

Vertices extract_vertices(const GlottisMask& mask, std::size_t min_area) {
  const std::size_t area = mask.area();
  if (area < std::max<std::size_t>(min_area, 1))
    throw Error(ErrorCode::MaskTooSmall,
                "area " + std::to_string(area) + " < " + std::to_string(min_area));
  bool first = true;
  int ux = 0, uy = 0, dx = 0, dy = 0, lx = 0, ly = 0, rx = 0, ry = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      if (first) {
        ux = dx = lx = rx = x;
        uy = dy = ly = ry = y;
        first = false;
        continue;
      }
      // Row-major scan: the first hit is already the minimal-y, minimal-x U.
      if (y > dy || (y == dy && x < dx)) dx = x, dy = y;
      if (x < lx || (x == lx && y < ly)) lx = x, ly = y;
      if (x > rx || (x == rx && y < ry)) rx = x, ry = y;
    }
  }
  return {{double(ux), double(uy)}, {double(dx), double(dy)},
          {double(lx), double(ly)}, {double(rx), double(ry)}};
}

Midline midline(const Vertices& v) {
  const Point2 c = (v.top + v.bottom + v.left + v.right) * 0.25;
  const Point2 d = v.bottom - c;
  if (norm(d) < 1.0)
    throw Error(ErrorCode::DegenerateMidline, "centre and bottom vertex are < 1 px apart");
  return {c, normalized(d)};
}

// Samples that land exactly on a pixel edge belong to the pixel the walk
// comes from; otherwise walks to the left and right disagree by half a pixel.
namespace {
bool contains_along(const GlottisMask& mask, Point2 p, Point2 dir) {
  return mask.contains(p - dir * 1e-7);
}
}  // namespace

std::optional<Point2> march_to_boundary(const GlottisMask& mask, Point2 origin, Point2 dir,
                                        double step) {
  std::optional<Point2> last;
  const std::size_t limit = max_steps(mask, step);
  for (std::size_t j = 0; j <= limit; ++j) {
    const Point2 p = origin + dir * (static_cast<double>(j) * step);
    if (!inside_image(mask, p)) break;
    if (contains_along(mask, p, dir)) {
      last = p;
    } else if (last) {
      break;
    }
  }
  return last;
}

std::optional<Chord> clip_line(const GlottisMask& mask, Point2 start, Point2 end, double step) {
  const Point2 delta = end - start;
  const double length = norm(delta);
  if (length == 0.0) {
    if (mask.contains(start)) return Chord{start, start};
    return std::nullopt;
  }
  const Point2 dir = delta * (1.0 / length);
  const auto samples = static_cast<std::size_t>(std::floor(length / step));
  std::optional<Point2> first, last;
  auto visit = [&](Point2 p) {
    if (!contains_along(mask, p, dir)) return;
    if (!first) first = p;
    last = p;
  };
  for (std::size_t j = 0; j <= samples; ++j) visit(start + dir * (static_cast<double>(j) * step));
  if (samples * step < length) visit(end);
  if (!first) return std::nullopt;
  return Chord{*first, *last};
}

std::vector<Level> level_points(const GlottisMask& mask, const Midline& line, Point2 bottom,
                                const GeometryConfig& cfg) {
  cfg.validate();
  const auto chord = clip_line(mask, line.center, bottom, cfg.ray_step);
  std::vector<Level> levels;
  levels.reserve(cfg.n_levels - 1);
  // cross(axis, normal) = 1 > 0, so +normal is the L side
  const Point2 normal{-line.axis.y, line.axis.x};
  for (std::size_t k = 1; k < cfg.n_levels; ++k) {
    Level lv;
    lv.k = k;
    if (!chord) {
      levels.push_back(lv);
      continue;
    }
    const double t = static_cast<double>(k) / static_cast<double>(cfg.n_levels);
    lv.center = chord->start + (chord->end - chord->start) * t;
    if (!mask.contains(lv.center)) {
      levels.push_back(lv);
      continue;
    }
    const auto l = march_to_boundary(mask, lv.center, normal, cfg.ray_step);
    const auto r = march_to_boundary(mask, lv.center, normal * -1.0, cfg.ray_step);
    if (l && r) {
      lv.left = *l;
      lv.right = *r;
      lv.valid = true;
    }
    levels.push_back(lv);
  }
  return levels;
}

QuadraticFit fit_quadratic(std::span<const Point2> points, double fit_eps) {
  QuadraticFit fit;
  const std::size_t n = points.size();
  if (n < 3) return fit;

  // Centre and scale x so the columns of [x^2, x, 1] are comparable.
  double mx = 0.0;
  for (const auto& p : points) mx += p.x;
  mx /= n;
  double sx = 0.0;
  for (const auto& p : points) sx = std::max(sx, std::abs(p.x - mx));
  if (sx == 0.0) return fit;

  std::vector<std::array<double, 3>> a(n);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (points[i].x - mx) / sx;
    a[i] = {u * u, u, 1.0};
    rhs[i] = points[i].y;
  }

  // Householder QR, applying each reflector to the right-hand side as well.
  std::array<double, 3> diag{};
  for (std::size_t j = 0; j < 3; ++j) {
    double col = 0.0;
    for (std::size_t i = j; i < n; ++i) col += a[i][j] * a[i][j];
    col = std::sqrt(col);
    if (col == 0.0) return fit;
    const double alpha = a[j][j] > 0.0 ? -col : col;
    std::vector<double> v(n - j);
    for (std::size_t i = j; i < n; ++i) v[i - j] = a[i][j];
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) {
      diag[j] = a[j][j];
      continue;
    }
    for (std::size_t c = j; c < 3; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < n; ++i) s += v[i - j] * a[i][c];
      s = 2.0 * s / vnorm2;
      for (std::size_t i = j; i < n; ++i) a[i][c] -= s * v[i - j];
    }
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += v[i - j] * rhs[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = j; i < n; ++i) rhs[i] -= s * v[i - j];
    diag[j] = a[j][j];
  }
  const double scale = std::max({std::abs(diag[0]), std::abs(diag[1]), std::abs(diag[2])});
  for (double d : diag)
    if (std::abs(d) <= 1e-10 * scale) return fit;

  std::array<double, 3> coef{};
  for (int j = 2; j >= 0; --j) {
    double s = rhs[j];
    for (int c = j + 1; c < 3; ++c) s -= a[j][c] * coef[c];
    coef[j] = s / a[j][j];
  }
  double resid = 0.0;
  for (std::size_t i = 3; i < n; ++i) resid += rhs[i] * rhs[i];

  // back to the unscaled variable: u = (x - mx) / sx
  const double p2 = coef[0] / (sx * sx), p1 = coef[1] / sx, p0 = coef[2];
  fit.a = p2;
  fit.b = p1 - 2.0 * p2 * mx;
  fit.c = p2 * mx * mx - p1 * mx + p0;
  fit.residual_rms = std::sqrt(resid / n);
  fit.ok = std::abs(fit.a) >= fit_eps;
  return fit;
}

Point2 rotate_about(Point2 p, Point2 pivot, double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  const Point2 d = p - pivot;
  return pivot + Point2{c * d.x - s * d.y, s * d.x + c * d.y};
}

Correction quadratic_correction(const GlottisMask& mask, std::span<const Level> levels,
                                const Midline& line, Point2 bottom,
                                const GeometryConfig& cfg) {
  Correction out;
  const double gamma = std::numbers::pi / 2.0 - std::atan2(line.axis.y, line.axis.x);
  out.gamma_deg = gamma * kRadToDeg;

  std::vector<Point2> rotated;
  for (const auto& lv : levels) {
    if (!lv.valid) continue;
    rotated.push_back(rotate_about(lv.left, line.center, gamma) - line.center);
    rotated.push_back(rotate_about(lv.right, line.center, gamma) - line.center);
  }
  if (rotated.size() >= 3) out.fit = fit_quadratic(rotated, cfg.fit_eps);

  Point2 dir = line.axis;
  out.d_q = bottom;
  if (out.fit.ok) {
    const double xv = -out.fit.b / (2.0 * out.fit.a);
    const double yv = out.fit.c - out.fit.b * out.fit.b / (4.0 * out.fit.a);
    out.d_q = rotate_about(line.center + Point2{xv, yv}, line.center, -gamma);
    const Point2 delta = out.d_q - line.center;
    if (norm(delta) > kCoincident) {
      dir = normalized(delta);
    } else {
      out.fit.ok = false;
      out.d_q = bottom;
    }
  }
  out.fit_degenerate = !out.fit.ok;
  const auto exit = march_to_boundary(mask, line.center, dir, cfg.ray_step);
  out.d_prime = exit.value_or(bottom);
  return out;
}

double angle_at(Point2 vertex, Point2 a, Point2 b) {
  const Point2 u = a - vertex, v = b - vertex;
  const double c = dot(u, v) / (norm(u) * norm(v));
  return std::acos(std::clamp(c, -1.0, 1.0)) * kRadToDeg;
}

AngleSet glottal_angles(std::span<const Level> levels, Point2 center, Point2 d_prime) {
  if (distance(center, d_prime) < kCoincident)
    throw Error(ErrorCode::CoincidentPoints, "D' coincides with C");
  AngleSet out;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& lv : levels) {
    if (!lv.valid) {
      out.left.push_back(nan);
      out.right.push_back(nan);
      continue;
    }
    if (distance(lv.left, d_prime) < kCoincident || distance(lv.right, d_prime) < kCoincident)
      throw Error(ErrorCode::CoincidentPoints,
                  "D' coincides with a boundary point at level " + std::to_string(lv.k));
    out.left.push_back(angle_at(d_prime, lv.left, center));
    out.right.push_back(angle_at(d_prime, center, lv.right));
  }
  return out;
}

double FoldGeometry::corrected_midline_deg() const {
  const Point2 d = correction.d_prime - center;
  return std::atan2(d.y, d.x) * kRadToDeg;
}

FoldGeometry analyze_frame(const GlottisMask& mask, const GeometryConfig& cfg) {
  cfg.validate();
  FoldGeometry g;
  try {
    g.vertices = extract_vertices(mask, cfg.min_area);
    const Midline line = midline(g.vertices);
    g.center = line.center;
    g.axis = line.axis;
    g.levels = level_points(mask, line, g.vertices.bottom, cfg);
    if (std::none_of(g.levels.begin(), g.levels.end(), [](const Level& l) { return l.valid; }))
      throw Error(ErrorCode::LevelOutsideMask, "no level point lies inside the mask");
    g.correction = quadratic_correction(mask, g.levels, line, g.vertices.bottom, cfg);
    g.angles = glottal_angles(g.levels, g.center, g.correction.d_prime);
  } catch (const Error& e) {
    g.degenerate = std::string(to_string(e.code()));
    g.angles = {};
  }
  return g;
}

nlohmann::json to_json(const FoldGeometry& g) {
  nlohmann::json j;
  j["degenerate"] = g.degenerate ? nlohmann::json(*g.degenerate) : nlohmann::json(nullptr);
  if (g.degenerate && g.levels.empty() && g.vertices.top == Point2{} &&
      g.vertices.bottom == Point2{})
    return j;
  j["vertices"] = {{"U", point_json(g.vertices.top)},
                   {"D", point_json(g.vertices.bottom)},
                   {"L", point_json(g.vertices.left)},
                   {"R", point_json(g.vertices.right)}};
  j["C"] = point_json(g.center);
  j["axis"] = point_json(g.axis);
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : g.levels) {
    levels.push_back({{"k", lv.k},
                      {"valid", lv.valid},
                      {"C_k", point_json(lv.center)},
                      {"L_k", point_json(lv.left)},
                      {"R_k", point_json(lv.right)}});
  }
  j["levels"] = levels;
  j["gamma_deg"] = g.correction.gamma_deg;
  j["fit"] = {{"a", g.correction.fit.a},
              {"b", g.correction.fit.b},
              {"c", g.correction.fit.c},
              {"residual_rms", g.correction.fit.residual_rms},
              {"degenerate", g.correction.fit_degenerate}};
  j["D_q"] = point_json(g.correction.d_q);
  j["D_prime"] = point_json(g.correction.d_prime);
  j["angles"] = {{"left", g.angles.left}, {"right", g.angles.right}};
  return j;
}

std::size_t VFDynSeries::valid_frames() const {
  return static_cast<std::size_t>(
      std::count(frame_validity.begin(), frame_validity.end(), true));
}

VFDynResult vfdyn(const MaskSequence& seq, const GeometryConfig& cfg) {
  cfg.validate();
  VFDynResult out;
  out.frames.resize(seq.size());
  detail::parallel_for(seq.size(), [&](std::size_t i) {
    out.frames[i] = analyze_frame(seq.masks[i], cfg);
  });

  const std::size_t levels = cfg.n_levels - 1;
  auto& s = out.series;
  for (std::size_t k = 1; k <= levels; ++k) {
    s.left.push_back({"L" + std::to_string(k), std::vector<double>(seq.size())});
    s.right.push_back({"R" + std::to_string(k), std::vector<double>(seq.size())});
  }
  s.frame_validity.assign(seq.size(), false);
  auto usable = [&](const FoldGeometry& g) {
    if (!g.ok()) return false;
    for (std::size_t k = 0; k < levels; ++k)
      if (!std::isfinite(g.angles.left[k]) || !std::isfinite(g.angles.right[k])) return false;
    return true;
  };

  std::optional<std::size_t> first_valid;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (usable(out.frames[i])) {
      first_valid = i;
      break;
    }
  }
  if (!first_valid)
    throw Error(ErrorCode::AllFramesDegenerate,
                "none of " + std::to_string(seq.size()) + " frames produced fold angles");

  std::size_t source = *first_valid;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (usable(out.frames[i])) {
      source = i;
      s.frame_validity[i] = true;
    }
    for (std::size_t k = 0; k < levels; ++k) {
      s.left[k].values[i] = out.frames[source].angles.left[k];
      s.right[k].values[i] = out.frames[source].angles.right[k];
    }
  }
  return out;
}

std::string vfdyn_to_csv(const VFDynSeries& series, std::span<const SeriesChannel> extras) {
  std::vector<SeriesChannel> cols;
  cols.insert(cols.end(), series.left.begin(), series.left.end());
  cols.insert(cols.end(), series.right.begin(), series.right.end());
  cols.insert(cols.end(), extras.begin(), extras.end());
  SeriesChannel valid{"valid", {}};
  for (bool v : series.frame_validity) valid.values.push_back(v ? 1.0 : 0.0);
  cols.push_back(std::move(valid));
  return series_to_csv(cols);
}

VFDynSeries vfdyn_from_csv(const std::string& text) {
  const auto channels = series_from_csv(text);
  VFDynSeries s;
  const SeriesChannel* valid = nullptr;
  auto level_of = [](const std::string& label, char side) -> std::optional<std::size_t> {
    if (label.size() < 2 || label[0] != side) return std::nullopt;
    if (!std::all_of(label.begin() + 1, label.end(), [](char c) { return std::isdigit(c); }))
      return std::nullopt;
    return static_cast<std::size_t>(std::stoul(label.substr(1)));
  };
  std::vector<std::pair<std::size_t, const SeriesChannel*>> left, right;
  for (const auto& ch : channels) {
    if (auto k = level_of(ch.label, 'L')) left.emplace_back(*k, &ch);
    else if (auto k2 = level_of(ch.label, 'R')) right.emplace_back(*k2, &ch);
    else if (ch.label == "valid") valid = &ch;
  }
  if (left.empty() || left.size() != right.size())
    throw Error(ErrorCode::UnsupportedFormat, "VFDyn CSV needs matching L* and R* columns");
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  for (const auto& [k, ch] : left) s.left.push_back(*ch);
  for (const auto& [k, ch] : right) s.right.push_back(*ch);
  const std::size_t n = s.left.front().values.size();
  if (valid) {
    for (double v : valid->values) s.frame_validity.push_back(v != 0.0);
  } else {
    s.frame_validity.assign(n, true);
  }
  return s;
}

}  // namespace laryngo::geometry

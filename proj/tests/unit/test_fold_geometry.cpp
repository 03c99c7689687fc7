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

#include <cmath>
#include <numbers>

#include "laryngo/error.hpp"
#include "laryngo/fold_geometry.hpp"
#include "laryngo/synth.hpp"
#include "oracles.hpp"

using namespace laryngo;
using namespace laryngo::geometry;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::BadParams;
}

// Difference between two undirected line directions, degrees in [0, 90].
double line_diff_deg(double a, double b) {
  double d = std::fmod(std::abs(a - b), 180.0);
  return std::min(d, 180.0 - d);
}

synth::MaskSample ellipse(double rot, double a = 20.0, double b = 40.0) {
  synth::EllipseParams p;
  p.width = 100;
  p.height = 100;
  p.frame = {{50.0, 50.0}, rot};
  p.semi_minor = a;
  p.semi_major = b;
  return synth::gen_ellipse_mask(p);
}

}  // namespace

TEST_CASE("vertices of a rectangle at the origin") {
  auto m = oracle::rect_mask(30, 30, 0, 0, 10, 20);
  auto v = extract_vertices(m);
  CHECK(v.top == Point2{0, 0});
  CHECK(v.bottom == Point2{0, 19});
  CHECK(v.left == Point2{0, 0});
  CHECK(v.right == Point2{9, 0});
}

TEST_CASE("tiny masks are rejected") {
  auto m = oracle::rect_mask(10, 10, 4, 4, 1, 1);
  CHECK(code_of([&] { extract_vertices(m); }) == ErrorCode::MaskTooSmall);
  CHECK(code_of([&] { extract_vertices(GlottisMask(5, 5)); }) == ErrorCode::MaskTooSmall);
}

TEST_CASE("vertices and midline of a digital ellipse") {
  auto s = ellipse(0.0);
  auto v = extract_vertices(s.mask);
  CHECK(distance(v.top, {50, 10}) <= 1.0);
  CHECK(distance(v.bottom, {50, 89}) <= 1.0);
  auto line = midline(v);
  CHECK(std::abs(std::atan2(line.axis.x, line.axis.y)) * kDeg < 1.0);
}

TEST_CASE("midline of a square's edge midpoints") {
  Vertices v{{5, 0}, {5, 10}, {0, 5}, {10, 5}};
  auto line = midline(v);
  CHECK(line.center == Point2{5, 5});
  CHECK(line.axis.y == doctest::Approx(1.0));
  Vertices flat{{5, 5}, {5, 5}, {5, 5}, {5, 5}};
  CHECK(code_of([&] { midline(flat); }) == ErrorCode::DegenerateMidline);
}

TEST_CASE("marching and clipping") {
  auto m = oracle::rect_mask(40, 40, 10, 10, 11, 5);
  auto hit = march_to_boundary(m, {15, 12}, {1, 0}, 0.5);
  REQUIRE(hit);
  CHECK(hit->x == doctest::Approx(20.5));
  hit = march_to_boundary(m, {15, 12}, {-1, 0}, 0.5);
  REQUIRE(hit);
  CHECK(hit->x == doctest::Approx(9.5));
  // starting outside, the walk skips ahead until it enters
  hit = march_to_boundary(m, {0, 12}, {1, 0}, 0.5);
  REQUIRE(hit);
  CHECK(hit->x == doctest::Approx(20.5));
  CHECK_FALSE(march_to_boundary(m, {0, 0}, {1, 0}, 0.5));

  auto chord = clip_line(m, {15, 0}, {15, 39}, 0.5);
  REQUIRE(chord);
  // an edge sample belongs to the pixel it is entered from
  CHECK(chord->start.y == doctest::Approx(10.0));
  CHECK(chord->end.y == doctest::Approx(14.5));
  CHECK_FALSE(clip_line(m, {0, 0}, {39, 0}, 0.5));
}

TEST_CASE("rectangle levels keep a constant width") {
  auto m = oracle::rect_mask(60, 110, 20, 0, 21, 100);
  Midline line{{30, 0}, {0, 1}};
  GeometryConfig cfg;
  cfg.n_levels = 4;
  auto levels = level_points(m, line, {30, 99}, cfg);
  REQUIRE(levels.size() == 3);
  for (const auto& lv : levels) {
    CHECK(lv.valid);
    CHECK(std::abs(distance(lv.left, lv.right) - 21.0) <= cfg.ray_step);
    // +x axis turned by +90 deg is -x: L is the image-left side
    CHECK(lv.left.x < lv.right.x);
  }
}

TEST_CASE("a notch on the midline skips only its level") {
  auto m = oracle::rect_mask(60, 110, 20, 0, 21, 100);
  for (int y = 47; y <= 52; ++y)
    for (int x = 25; x <= 35; ++x) m.set(x, y, false);
  Midline line{{30, 0}, {0, 1}};
  GeometryConfig cfg;
  cfg.n_levels = 4;
  auto levels = level_points(m, line, {30, 99}, cfg);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].valid);
  CHECK_FALSE(levels[1].valid);
  CHECK(levels[2].valid);
  CHECK(std::abs(distance(levels[2].left, levels[2].right) - 21.0) <= cfg.ray_step);
}

TEST_CASE("ellipse chords match the analytic chord") {
  synth::EllipseParams p;
  p.width = 100;
  p.height = 100;
  p.frame = {{50.0, 50.0}, 0.0};
  p.semi_minor = 20;
  p.semi_major = 40;
  auto s = synth::gen_ellipse_mask(p);
  GeometryConfig cfg;
  auto g = analyze_frame(s.mask, cfg);
  REQUIRE(g.ok());
  for (const auto& lv : g.levels) {
    REQUIRE(lv.valid);
    const double want = synth::ellipse_chord(p, lv.center.y - 50.0);
    CHECK(std::abs(distance(lv.left, lv.right) - want) <= 2 * cfg.ray_step + 1e-9);
  }
}

TEST_CASE("quadratic fit exactness and degeneracy") {
  std::vector<Point2> pts;
  for (double x : {-3.0, -2.0, -1.0, 1.0, 2.0, 3.0}) pts.push_back({x, x * x});
  auto f = fit_quadratic(pts, 1e-6);
  REQUIRE(f.ok);
  CHECK(f.a == doctest::Approx(1.0));
  CHECK(std::abs(f.b) < 1e-12);
  CHECK(std::abs(f.c) < 1e-12);
  CHECK(f.residual_rms < 1e-9);

  std::vector<Point2> line{{0, 1}, {1, 3}, {2, 5}, {3, 7}};
  CHECK_FALSE(fit_quadratic(line, 1e-6).ok);
  std::vector<Point2> two{{0, 0}, {1, 1}};
  CHECK_FALSE(fit_quadratic(two, 1e-6).ok);
}

TEST_CASE("vertex survives a rotated round trip") {
  GlottisMask full(200, 200);
  for (int y = 0; y < 200; ++y)
    for (int x = 0; x < 200; ++x) full.set(x, y, true);
  const Point2 c{100, 40};
  const Point2 vertex{100, 90};
  for (double deg : {0.0, 30.0, -45.0}) {
    const double r = deg / kDeg;
    std::vector<Level> levels;
    for (double x : {1.0, 2.0, 3.0}) {
      Level lv;
      lv.valid = true;
      lv.left = rotate_about({vertex.x + x, vertex.y - x * x}, c, r);
      lv.right = rotate_about({vertex.x - x, vertex.y - x * x}, c, r);
      levels.push_back(lv);
    }
    Midline line{c, rotate_about(Point2{0, 1}, {0, 0}, r)};
    GeometryConfig cfg;
    auto corr = quadratic_correction(full, levels, line, c + line.axis * 10.0, cfg);
    REQUIRE_FALSE(corr.fit_degenerate);
    const auto want = rotate_about(vertex, c, r);
    CHECK(distance(corr.d_q, want) < 1e-6);
  }
}

TEST_CASE("collinear points fall back to the original midline") {
  auto m = oracle::rect_mask(60, 110, 20, 0, 21, 100);
  std::vector<Level> levels;
  for (double t : {2.0, 4.0, 6.0}) {
    Level lv;
    lv.valid = true;
    lv.left = {30 - t, 20 + t};
    lv.right = {30 + t, 20 - t};
    levels.push_back(lv);
  }
  GeometryConfig cfg;
  Midline line{{30, 0}, {0, 1}};
  auto corr = quadratic_correction(m, levels, line, {30, 99}, cfg);
  CHECK(corr.fit_degenerate);
  CHECK(corr.d_q == Point2{30, 99});
  CHECK(corr.d_prime.x == doctest::Approx(30));
  CHECK(corr.d_prime.y == doctest::Approx(99.5));
}

TEST_CASE("angles") {
  CHECK(angle_at({0, 0}, {-1, 0}, {0, -1}) == doctest::Approx(90.0));
  CHECK(angle_at({0, 0}, {0, -3}, {0, -1}) == doctest::Approx(0.0));
  std::vector<Level> lv(1);
  lv[0].valid = true;
  lv[0].left = {-1, 0};
  lv[0].right = {1, 0};
  auto a = glottal_angles(lv, {0, -1}, {0, 0});
  CHECK(a.left[0] == doctest::Approx(90.0));
  CHECK(a.right[0] == doctest::Approx(90.0));
  CHECK(code_of([&] { glottal_angles(lv, {0, 0}, {0, 0}); }) == ErrorCode::CoincidentPoints);
  CHECK(code_of([&] { glottal_angles(lv, {0, -1}, {-1, 0}); }) == ErrorCode::CoincidentPoints);
}

TEST_CASE("upright ellipse gives symmetric angles") {
  auto g = analyze_frame(ellipse(0.0).mask, GeometryConfig{});
  REQUIRE(g.ok());
  REQUIRE(g.angles.left.size() == 9);
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(std::abs(g.angles.left[k] - g.angles.right[k]) < 2.0);
    CHECK(g.angles.left[k] > 0.0);
    CHECK(g.angles.left[k] < 180.0);
  }
}

TEST_CASE("analyze_frame reports degeneracy instead of throwing") {
  auto g = analyze_frame(GlottisMask(20, 20), GeometryConfig{});
  REQUIRE_FALSE(g.ok());
  CHECK(*g.degenerate == "MaskTooSmall");
  auto j = to_json(g);
  CHECK(j["degenerate"] == "MaskTooSmall");
}

TEST_CASE("teardrop midline is recovered") {
  synth::TeardropParams p;
  p.width = 240;
  p.height = 240;
  p.frame = {{120.0, 120.0}, 0.0};
  p.length = 160;
  for (double apex : {30.0, 40.0, 60.0}) {
    p.apex_angle_deg = apex;
    for (double rot : {0.0, 15.0, 30.0, 45.0}) {
      p.frame.rotation_deg = rot;
      auto s = synth::gen_teardrop_mask(p);
      auto g = analyze_frame(s.mask, GeometryConfig{});
      REQUIRE(g.ok());
      const double err = line_diff_deg(g.corrected_midline_deg(), s.midline_deg);
      CAPTURE(apex);
      CAPTURE(rot);
      CHECK(err < (rot == 0.0 ? 0.5 : 3.0));
    }
  }
}

TEST_CASE("rectangle chords stay constant along the midline") {
  auto m = oracle::rect_mask(60, 120, 20, 10, 21, 100);
  auto g = analyze_frame(m, GeometryConfig{});
  REQUIRE(g.ok());
  const double w0 = distance(g.levels[0].left, g.levels[0].right);
  for (const auto& lv : g.levels) CHECK(std::abs(distance(lv.left, lv.right) - w0) <= 0.5);
}

TEST_CASE("vfdyn on constant, oscillating and empty sequences") {
  GeometryConfig cfg;
  MaskSequence constant{25.0, std::vector<GlottisMask>(6, ellipse(0.0).mask)};
  auto r = vfdyn(constant, cfg);
  CHECK(r.series.valid_frames() == 6);
  CHECK(r.series.n_levels() == 10);
  for (const auto& ch : r.series.left) CHECK(oracle::population_variance(ch.values) == 0.0);

  synth::OscParams p;  // left boundary still, right oscillating
  auto osc = synth::gen_osc_sequence(p, 5);
  auto v = vfdyn(osc.seq, cfg).series;
  double vl = 0.0, vr = 0.0;
  for (std::size_t k = 0; k < v.left.size(); ++k) {
    vl += oracle::population_variance(v.left[k].values);
    vr += oracle::population_variance(v.right[k].values);
  }
  CHECK(vr > 2.0 * vl);

  MaskSequence empty{25.0, std::vector<GlottisMask>(4, GlottisMask(30, 30))};
  CHECK(code_of([&] { vfdyn(empty, cfg); }) == ErrorCode::AllFramesDegenerate);
}

TEST_CASE("degenerate frames hold the neighbouring valid values") {
  GeometryConfig cfg;
  auto a = ellipse(0.0).mask;
  auto b = ellipse(0.0, 15.0, 40.0).mask;
  MaskSequence seq{25.0, {GlottisMask(100, 100), a, GlottisMask(100, 100), b}};
  auto r = vfdyn(seq, cfg);
  CHECK(r.series.frame_validity == std::vector<bool>{false, true, false, true});
  for (const auto& ch : r.series.left) {
    CHECK(ch.values[0] == ch.values[1]);
    CHECK(ch.values[2] == ch.values[1]);
  }
  auto csv = vfdyn_to_csv(r.series, std::vector<SeriesChannel>{{"GAW", {0, 1, 0, 1}}});
  CHECK(csv.rfind("L1,", 0) == 0);
  auto back = vfdyn_from_csv(csv);
  CHECK(back.frame_validity == r.series.frame_validity);
  CHECK(back.left[3].values == r.series.left[3].values);
  CHECK(back.right[8].label == "R9");
}

TEST_CASE("geometry config json and validation") {
  GeometryConfig c;
  c.n_levels = 6;
  nlohmann::json j = c;
  CHECK(j.get<GeometryConfig>().n_levels == 6);
  GeometryConfig bad;
  bad.n_levels = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.ray_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

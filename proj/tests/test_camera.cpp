#include "doctest.h"
#include "linesim/camera.hpp"
#include "linesim/geom2d.hpp"
#include "linesim/util.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

using namespace linesim;

namespace {

std::mt19937 rng(777);

double urand(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CameraModel ground_truth() {
  CameraModel m;
  m.a11 = 2.0;
  m.a12 = -85.0;
  m.a13 = 12.0;
  m.a14 = 331.0;
  m.a21 = -98.0;
  m.a22 = 3.0;
  m.a23 = 9.0;
  m.a24 = 512.0;
  return m;
}

// A non-degenerate 12-point rig spanning three heights.
CalibrationSet make_rig(const CameraModel& m) {
  CalibrationSet set;
  const double heights[] = {0.0, 0.25, 0.5};
  const double coords[][2] = {{1.0, -1.5}, {2.0, 0.5}, {3.5, 1.0}, {4.0, 2.5}};
  for (double h : heights)
    for (auto& c : coords) {
      GroundPoint g{c[0], c[1], h};
      set.points.push_back({g, project(m, g)});
    }
  return set;
}

// Independent 4x4 linear solve (Gaussian elimination with partial pivoting)
// used to cross-check the calibration against the normal equations.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> A,
                             std::array<double, 4> b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 4; ++r) {
      double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

bool coef_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("project evaluates the affine image map") {
  CameraModel m;
  m.a11 = 1.0;
  auto p = project(m, {3.0, 7.0, 2.0});
  CHECK(p.xpi == doctest::Approx(3.0));
  CHECK(p.ypi == doctest::Approx(0.0));

  CameraModel c = ground_truth();
  for (int i = 0; i < 200; ++i) {
    GroundPoint g{urand(-5, 5), urand(-5, 5), urand(0, 1)};
    auto ip = project(c, g);
    // Independent dot-product evaluation.
    double ex = c.a11 * g.xg + c.a12 * g.yg + c.a13 * g.zg + c.a14;
    double ey = c.a21 * g.xg + c.a22 * g.yg + c.a23 * g.zg + c.a24;
    CHECK(ip.xpi == doctest::Approx(ex).epsilon(1e-14));
    CHECK(ip.ypi == doctest::Approx(ey).epsilon(1e-14));
  }
}

TEST_CASE("calibrate recovers exact coefficients from a clean rig") {
  CameraModel truth = ground_truth();
  auto set = make_rig(truth);
  auto rep = calibrate(set, 0.0);
  CHECK(coef_close(rep.model.a11, truth.a11, 1e-9));
  CHECK(coef_close(rep.model.a12, truth.a12, 1e-9));
  CHECK(coef_close(rep.model.a13, truth.a13, 1e-9));
  CHECK(coef_close(rep.model.a14, truth.a14, 1e-9));
  CHECK(coef_close(rep.model.a21, truth.a21, 1e-9));
  CHECK(coef_close(rep.model.a22, truth.a22, 1e-9));
  CHECK(coef_close(rep.model.a23, truth.a23, 1e-9));
  CHECK(coef_close(rep.model.a24, truth.a24, 1e-9));
  CHECK(rep.rms < 1e-9);
  CHECK(rep.residual_x.size() == set.points.size());
  CHECK(rep.residual_y.size() == set.points.size());
}

TEST_CASE("calibrate rejects fewer than four points") {
  CameraModel truth = ground_truth();
  CalibrationSet set;
  for (int i = 0; i < 3; ++i) {
    GroundPoint g{1.0 + i, 0.5 * i, 0.1 * i};
    set.points.push_back({g, project(truth, g)});
  }
  CHECK_THROWS_AS(calibrate(set), InsufficientPoints);
}

TEST_CASE("calibrate rejects coplanar (rank-deficient) rigs") {
  CameraModel truth = ground_truth();
  CalibrationSet set;
  // All points on the plane zg = 0.3: the zg column is dependent on the
  // constant column, so the design matrix has rank 3.
  for (int i = 0; i < 8; ++i) {
    GroundPoint g{urand(0.5, 5), urand(-2, 2), 0.3};
    set.points.push_back({g, project(truth, g)});
  }
  CHECK_THROWS_AS(calibrate(set), DegenerateCalibration);
}

TEST_CASE("calibrate under gaussian pixel noise stays accurate") {
  CameraModel truth = ground_truth();
  std::mt19937_64 noise_rng(0xabcdef);
  std::normal_distribution<double> noise(0.0, 0.5);

  // A denser rig for the noisy fit, plus held-out probes.
  CalibrationSet set;
  for (double h : {0.0, 0.2, 0.4, 0.6})
    for (double x : {0.5, 1.5, 2.5, 3.5, 4.5})
      for (double y : {-2.0, -0.5, 1.0, 2.0}) {
        GroundPoint g{x, y, h};
        auto ip = project(truth, g);
        ip.xpi += noise(noise_rng);
        ip.ypi += noise(noise_rng);
        set.points.push_back({g, ip});
      }
  auto rep = calibrate(set, 0.0);
  CHECK(rep.rms <= 1.5);  // sigma = 0.5 px: fit residual stays near sigma
  // Held-out reprojection error under 3 px.
  for (int i = 0; i < 50; ++i) {
    GroundPoint g{urand(0.5, 4.5), urand(-2, 2), urand(0, 0.6)};
    auto want = project(truth, g);
    auto got = project(rep.model, g);
    CHECK(std::abs(got.xpi - want.xpi) < 3.0);
    CHECK(std::abs(got.ypi - want.ypi) < 3.0);
  }
}

TEST_CASE("calibrate agrees with the normal equations") {
  CameraModel truth = ground_truth();
  auto set = make_rig(truth);
  // Perturb pixels so the system is genuinely overdetermined.
  std::mt19937_64 nrng(42);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& pr : set.points) {
    pr.second.xpi += noise(nrng);
    pr.second.ypi += noise(nrng);
  }
  auto rep = calibrate(set, 0.0);

  // Build C^T C and C^T b by hand and solve with local elimination.
  std::array<std::array<double, 4>, 4> ctc{};
  std::array<double, 4> ctx{}, cty{};
  for (auto& pr : set.points) {
    const auto& g = pr.first;
    std::array<double, 4> row{g.xg, g.yg, g.zg, 1.0};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) ctc[i][j] += row[i] * row[j];
      ctx[i] += row[i] * pr.second.xpi;
      cty[i] += row[i] * pr.second.ypi;
    }
  }
  auto ax = solve4(ctc, ctx);
  auto ay = solve4(ctc, cty);
  CHECK(coef_close(rep.model.a11, ax[0], 1e-8));
  CHECK(coef_close(rep.model.a12, ax[1], 1e-8));
  CHECK(coef_close(rep.model.a13, ax[2], 1e-8));
  CHECK(coef_close(rep.model.a14, ax[3], 1e-8));
  CHECK(coef_close(rep.model.a21, ay[0], 1e-8));
  CHECK(coef_close(rep.model.a22, ay[1], 1e-8));
  CHECK(coef_close(rep.model.a23, ay[2], 1e-8));
  CHECK(coef_close(rep.model.a24, ay[3], 1e-8));
}

TEST_CASE("calibrate is invariant to point order") {
  CameraModel truth = ground_truth();
  auto set = make_rig(truth);
  std::mt19937_64 nrng(9);
  std::normal_distribution<double> noise(0.0, 0.8);
  for (auto& pr : set.points) {
    pr.second.xpi += noise(nrng);
    pr.second.ypi += noise(nrng);
  }
  auto a = calibrate(set, 0.0);
  auto shuffled = set;
  std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
  auto b = calibrate(shuffled, 0.0);
  CHECK(coef_close(b.model.a11, a.model.a11, 1e-9));
  CHECK(coef_close(b.model.a14, a.model.a14, 1e-9));
  CHECK(coef_close(b.model.a22, a.model.a22, 1e-9));
  CHECK(coef_close(b.model.a24, a.model.a24, 1e-9));
  CHECK(b.rms == doctest::Approx(a.rms).epsilon(1e-9));
}

TEST_CASE("adding a constant to one pixel axis shifts only its offset term") {
  CameraModel truth = ground_truth();
  auto set = make_rig(truth);
  auto base = calibrate(set, 0.0);
  auto shifted = set;
  for (auto& pr : shifted.points) pr.second.xpi += 17.0;
  auto rep = calibrate(shifted, 0.0);
  CHECK(coef_close(rep.model.a11, base.model.a11, 1e-9));
  CHECK(coef_close(rep.model.a12, base.model.a12, 1e-9));
  CHECK(coef_close(rep.model.a13, base.model.a13, 1e-9));
  CHECK(coef_close(rep.model.a14, base.model.a14 + 17.0, 1e-9));
  CHECK(coef_close(rep.model.a24, base.model.a24, 1e-9));
}

TEST_CASE("back_project inverts project at the fixed height") {
  CameraModel m = ground_truth();
  m.zg_fixed = 0.25;
  for (int i = 0; i < 300; ++i) {
    GroundPoint g{urand(-5, 5), urand(-5, 5), m.zg_fixed};
    auto ip = project(m, g);
    auto back = back_project(m, ip);
    CHECK(back.xg == doctest::Approx(g.xg).epsilon(1e-9));
    CHECK(back.yg == doctest::Approx(g.yg).epsilon(1e-9));
    CHECK(back.zg == doctest::Approx(m.zg_fixed));
    // And the forward map reproduces the pixel.
    auto ip2 = project(m, back);
    CHECK(std::abs(ip2.xpi - ip.xpi) < 1e-9);
    CHECK(std::abs(ip2.ypi - ip.ypi) < 1e-9);
  }
}

TEST_CASE("back_project rejects a singular view matrix") {
  CameraModel m;
  m.a11 = 1.0;
  m.a12 = 2.0;
  m.a21 = 2.0;
  m.a22 = 4.0;  // rank-1 Q
  m.a14 = 10.0;
  m.a24 = 20.0;
  CHECK_THROWS_AS(back_project(m, {11.0, 22.0}), SingularViewGeometry);
}

TEST_CASE("line_pose_from_points matches stated examples") {
  // Line along +x through the origin.
  auto p = line_pose_from_points({1, 0, 0}, {2, 0, 0});
  CHECK(p.angle == doctest::Approx(0.0));
  CHECK(p.offset == doctest::Approx(0.0));
  // Parallel line one meter to the left.
  p = line_pose_from_points({1, 1, 0}, {2, 1, 0});
  CHECK(p.angle == doctest::Approx(0.0));
  CHECK(p.offset == doctest::Approx(1.0));
  // Vertical line x = 1, pointing +y: the line is on the vehicle's right.
  p = line_pose_from_points({1, 0, 0}, {1, 1, 0});
  CHECK(p.angle == doctest::Approx(kPi / 2));
  CHECK(p.offset == doctest::Approx(-1.0));
}

TEST_CASE("line_pose offset equals the rotated-frame lateral coordinate") {
  for (int i = 0; i < 500; ++i) {
    GroundPoint n{urand(-4, 4), urand(-4, 4), 0};
    GroundPoint f{urand(-4, 4), urand(-4, 4), 0};
    double dx = f.xg - n.xg, dy = f.yg - n.yg;
    if (std::hypot(dx, dy) < 1e-3) continue;
    auto p = line_pose_from_points(n, f);
    // Rotate the near point so the line direction lies along +x; the line's
    // constant lateral coordinate in that frame is the signed offset.
    Point2 rn = apply(make_rotation(-p.angle), {n.xg, n.yg});
    CHECK(p.offset == doctest::Approx(rn.y).epsilon(1e-9));
    // |offset| is the distance from the origin to the line.
    double d = std::abs(cross({dx, dy}, {-n.xg, -n.yg})) / std::hypot(dx, dy);
    CHECK(std::abs(p.offset) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("swapping near and far flips the line orientation") {
  GroundPoint n{1.0, 0.5, 0}, f{3.0, 1.5, 0};
  auto a = line_pose_from_points(n, f);
  auto b = line_pose_from_points(f, n);
  CHECK(b.offset == doctest::Approx(-a.offset));
  double diff = std::abs(wrap_angle(b.angle - a.angle));
  CHECK(diff == doctest::Approx(kPi));
}

TEST_CASE("a line through the origin has zero offset") {
  for (int i = 0; i < 100; ++i) {
    double ang = urand(-3, 3);
    GroundPoint n{std::cos(ang), std::sin(ang), 0};
    GroundPoint f{2 * std::cos(ang), 2 * std::sin(ang), 0};
    auto p = line_pose_from_points(n, f);
    CHECK(std::abs(p.offset) < 1e-12);
  }
}

TEST_CASE("line_pose_from_points rejects coincident points") {
  CHECK_THROWS_AS(line_pose_from_points({1, 1, 0}, {1, 1, 0}), CoincidentPoints);
  CHECK_THROWS_AS(line_pose_from_points({1, 1, 0}, {1 + 5e-7, 1, 0}), CoincidentPoints);
}

TEST_CASE("parse_correspondences reads the rig file format") {
  auto dir = make_temp_dir("cam");
  auto good = dir / "good.txt";
  write_text(good,
             "# comment line\n"
             "1.0 2.0 0.0 100.0 200.0\n"
             "3.0 -1.0 0.5 50.0 75.0 1\n"
             "\n"
             "0.5 0.5 0.25 320.0 240.0 1.0\n");
  auto set = parse_correspondences(good.string());
  REQUIRE(set.points.size() == 3);
  CHECK(set.points[0].first.xg == doctest::Approx(1.0));
  CHECK(set.points[1].second.ypi == doctest::Approx(75.0));
  CHECK(set.points[2].first.zg == doctest::Approx(0.25));

  auto bad_weight = dir / "badw.txt";
  write_text(bad_weight, "1 2 0 10 20\n1 2 0.5 10 20 0.5\n");
  try {
    parse_correspondences(bad_weight.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  auto bad_fields = dir / "badf.txt";
  write_text(bad_fields, "1 2 0 10\n");
  CHECK_THROWS_AS(parse_correspondences(bad_fields.string()), ParseError);

  std::filesystem::remove_all(dir);
}

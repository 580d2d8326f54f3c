#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isocon/curvature.hpp"
#include "isocon/error.hpp"
#include "isocon/moments.hpp"

#include <cmath>
#include <numbers>

using namespace isocon;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ConvexBody square() {
  return convex_hull(PointList{vec({-1, -1}), vec({1, -1}), vec({1, 1}), vec({-1, 1})});
}

ConvexBody cube3() {
  PointList pts;
  for (int mask = 0; mask < 8; ++mask) pts.push_back(vec({mask & 1 ? 0.5 : -0.5, mask & 2 ? 0.5 : -0.5, mask & 4 ? 0.5 : -0.5}));
  return convex_hull(pts);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

Mat random_rotation(int n, Rng& rng) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  return Eigen::HouseholderQR<Mat>(g).householderQ();
}

// Projection of I/(2R) onto the tangent space at a sphere point.
Mat sphere_form(const Vec& normal, double R) {
  const int n = static_cast<int>(normal.size());
  return (Mat::Identity(n, n) - normal * normal.transpose()) / (2 * R);
}

}  // namespace

TEST_CASE("unit ball at the south pole") {
  for (int n = 2; n <= 5; ++n) {
    const ConvexBody ball = Ball(Vec::Zero(n), 1.0);
    Vec x0 = Vec::Zero(n);
    x0[n - 1] = -1;
    const CurvatureEstimate e = estimate_quadratic_form(ball, x0, 0.05);
    CHECK((e.normal - x0).norm() < 1e-14);
    CHECK((e.q - 0.5 * Mat::Identity(n - 1, n - 1)).norm() < 0.01 * 0.5);
    CHECK(e.eps_hat <= 1e-3);
    CHECK(e.eps_hat >= 0);
    CHECK(e.verdict == CurvatureVerdict::Curved);
    CHECK((e.tangent_basis.transpose() * e.tangent_basis - Mat::Identity(n - 1, n - 1)).norm() < 1e-13);
    CHECK((e.tangent_basis.transpose() * e.normal).norm() < 1e-13);
  }
}

TEST_CASE("ellipse at the end of its minor axis") {
  // x^2/4 + y^2 = 1 near (0, -1): height 1 - sqrt(1 - x^2/4) = x^2/8 + O(x^4).
  const ConvexBody ell = Ellipsoid(Vec::Zero(2), Vec(vec({4, 1})).asDiagonal());
  const CurvatureEstimate e = estimate_quadratic_form(ell, vec({0, -1}), 0.05);
  CHECK(e.q(0, 0) == doctest::Approx(1.0 / 8).epsilon(0.02));
  const CurvatureEstimate f = estimate_quadratic_form(ell, vec({0, -1}), 0.01);
  CHECK(std::abs(f.q(0, 0) - 1.0 / 8) < std::abs(e.q(0, 0) - 1.0 / 8));
}

TEST_CASE("square: flat edge and cone-like vertex") {
  const ConvexBody sq = square();
  CHECK(code_of([&] { estimate_quadratic_form(sq, vec({1, 0}), 0.2); }) == ErrorCode::FlatPoint);
  CHECK(probe_curvature(sq, vec({1, 0}), 0.2).verdict == CurvatureVerdict::Flat);
  const CurvatureEstimate v = probe_curvature(sq, vec({1, 1}), 0.2);
  CHECK(v.verdict == CurvatureVerdict::Cone);
  CHECK(v.eps_hat > 0.5);
  CHECK((v.normal - vec({1, 1}) / std::sqrt(2.0)).norm() < 1e-14);
  CHECK(estimate_quadratic_form(sq, vec({1, 1}), 0.2).verdict == CurvatureVerdict::Cone);
}

TEST_CASE("sphere recovery over radii") {
  Rng rng(3);
  for (double R : {0.5, 1.0, 2.0}) {
    for (int n = 2; n <= 4; ++n) {
      const Vec c = rng.normal_vector(n);
      const ConvexBody ball = Ball(c, R);
      const Vec u = rng.unit_vector(n);
      const Vec x0 = c + R * u;
      const CurvatureEstimate e = estimate_quadratic_form(ball, x0, R / 20);
      const Mat expect = sphere_form(u, R);
      CHECK((e.ambient_form() - expect).norm() <= 0.02 * expect.norm());
      double prev = std::numeric_limits<double>::infinity();
      for (double r = R / 5; r > R / 200; r /= 2) {
        const double eps = estimate_quadratic_form(ball, x0, r).eps_hat;
        CHECK(eps < prev);
        prev = eps;
      }
    }
  }
}

TEST_CASE("rotation equivariance") {
  Rng rng(11);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
      const Mat shape = g * g.transpose() + 0.5 * Mat::Identity(n, n);
      const Vec c = rng.normal_vector(n);
      const Ellipsoid ell(c, shape);
      const Vec u = rng.unit_vector(n);
      const Vec x0 = c + u / std::sqrt(u.dot(ell.shape_inverse() * u));
      const Mat q = random_rotation(n, rng);
      const Ellipsoid rot(q * c, q * shape * q.transpose());
      const double r = 0.02 * std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(shape).eigenvalues().minCoeff());
      const CurvatureEstimate a = estimate_quadratic_form(ell, x0, r);
      const CurvatureEstimate b = estimate_quadratic_form(rot, q * x0, r);
      const Mat conj = q * a.ambient_form() * q.transpose();
      CAPTURE(n);
      CHECK((b.ambient_form() - conj).norm() <= 1e-8 * conj.norm());
      CHECK((b.normal - q * a.normal).norm() < 1e-10);
      CHECK(std::abs(b.eps_hat - a.eps_hat) <= 1e-6 * a.eps_hat + 1e-12);
    }
  }
}

TEST_CASE("cap model apex recovers the quadratic form") {
  for (int n = 2; n <= 4; ++n) {
    CapSpec s = CapSpec::unit_scaling(n, 1.5, 0.1, 0.0, 0.2);
    if (n == 3) s.lambda = vec({2, 0.5, 1});
    if (n == 4) s.lambda = vec({1.25, 0.8, 2, 0.5});
    Mat e = Mat::Zero(n - 1, n - 1);
    e(0, 0) = 0.1;
    if (n > 2) e(0, 1) = e(1, 0) = -0.05;
    const CapModel cap(s, e);
    const CurvatureEstimate est = estimate_quadratic_form(cap, Vec::Zero(n), 0.02);
    CHECK((est.normal + Vec::Unit(n, n - 1)).norm() < 1e-14);
    const Mat block = est.ambient_form().topLeftCorner(n - 1, n - 1);
    CHECK((block - cap.quadratic()).norm() <= 1e-10 * cap.quadratic().norm());
    CHECK(est.eps_hat < 1e-9);
    // Relative to the unperturbed form, the deviation stays within the sandwich.
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(block, cap.nominal_quadratic());
    CHECK(ges.eigenvalues().maxCoeff() <= s.R / (s.R - s.epsilon) + 1e-9);
    CHECK(ges.eigenvalues().minCoeff() >= s.R / (s.R + s.epsilon) - 1e-9);
  }
}

TEST_CASE("positive curvature implies strict convexity") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const Mat d = (rng.normal_vector(n).array().abs() + 0.5).matrix().asDiagonal();
    const Ellipsoid ell(Vec::Zero(n), d);
    const Vec u = rng.unit_vector(n);
    const Vec x0 = u / std::sqrt(u.dot(ell.shape_inverse() * u));
    const CurvatureEstimate e = estimate_quadratic_form(ell, x0, 0.05);
    if (e.eps_hat < 0.5) CHECK(strict_convexity_test(ell, x0));
  }
}

TEST_CASE("strict convexity") {
  const ConvexBody disc = Ball(Vec::Zero(2), 1.0);
  for (double t : {0.0, 1.0, 2.5, 4.0}) CHECK(strict_convexity_test(disc, vec({std::cos(t), std::sin(t)})));
  const ConvexBody sq = square();
  CHECK_FALSE(strict_convexity_test(sq, vec({1, 0})));
  // A vertex is an endpoint of two edges, which counts as lying on a segment.
  CHECK_FALSE(strict_convexity_test(sq, vec({1, 1})));
  const CapModel cap(CapSpec::unit_scaling(3, 1.0, 0.1));
  CHECK(strict_convexity_test(cap, Vec::Zero(3)));
  CHECK_FALSE(strict_convexity_test(cap, vec({0, 0, cap.height()})));
  CHECK(code_of([&] { strict_convexity_test(sq, vec({0.5, 0})); }) == ErrorCode::NotOnBoundary);
}

TEST_CASE("normal alignment") {
  SUBCASE("centered ball") {
    Rng rng(2);
    for (int n = 2; n <= 5; ++n) {
      const ConvexBody ball = Ball(Vec::Zero(n), 1.7);
      for (int i = 0; i < 10; ++i) CHECK(normal_alignment(ball, 1.7 * rng.unit_vector(n)) < 1e-7);
    }
  }
  SUBCASE("ellipse at t = pi/4") {
    const ConvexBody ell = Ellipsoid(Vec::Zero(2), Vec(vec({4, 1})).asDiagonal());
    const double t = std::numbers::pi / 4;
    const Vec x0 = vec({2 * std::cos(t), std::sin(t)});
    const Vec grad = vec({x0[0] / 4, x0[1]});  // gradient of x^2/4 + y^2, up to a factor 2
    const double expect = std::acos(grad.normalized().dot(x0.normalized()));
    CHECK(normal_alignment(ell, x0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(normal_alignment(ell, x0) == doctest::Approx(std::acos(0.8)).epsilon(1e-12));
  }
  SUBCASE("rectangle") {
    // [-2, 2] x [-1/2, 1/2]: the long side is y = 1/2 with normal e_2.
    const ConvexBody rect = convex_hull(PointList{vec({-2, -0.5}), vec({2, -0.5}), vec({2, 0.5}), vec({-2, 0.5})});
    CHECK(normal_alignment(rect, vec({0, 0.5})) < 1e-15);
    CHECK(normal_alignment(rect, vec({0, -0.5})) < 1e-15);
    for (double x : {0.3, -1.0, 1.7}) CHECK(normal_alignment(rect, vec({x, 0.5})) == doctest::Approx(std::atan(std::abs(x) / 0.5)));
    CHECK(code_of([&] { normal_alignment(rect, vec({2, 0.5})); }) == ErrorCode::NonUniqueNormal);
  }
  SUBCASE("cube ridges") {
    const ConvexBody c = cube3();
    CHECK(code_of([&] { normal_alignment(c, vec({0.5, 0.5, 0})); }) == ErrorCode::NonUniqueNormal);
    CHECK(code_of([&] { normal_alignment(c, vec({0.5, 0.5, 0.5})); }) == ErrorCode::NonUniqueNormal);
    CHECK(normal_alignment(c, vec({0.5, 0, 0})) < 1e-15);
    CHECK(active_face_count(c, vec({0.5, 0.5, 0.5})) == 3);
  }
  SUBCASE("off-centre body") {
    const ConvexBody ball = Ball(vec({1, 0}), 1.0);
    CHECK(code_of([&] { normal_alignment(ball, vec({2, 0})); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("probe preconditions") {
  const ConvexBody ball = Ball(Vec::Zero(3), 1.0);
  CHECK(code_of([&] { estimate_quadratic_form(ball, vec({0, 0, 0.5}), 0.05); }) == ErrorCode::NotOnBoundary);
  CHECK(code_of([&] { estimate_quadratic_form(ball, vec({0, 0, 1}), 0.6); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { estimate_quadratic_form(ball, vec({0, 0, 1}), 0.0); }) == ErrorCode::InvalidArgument);
  const ConvexBody sq = square();
  CHECK((outer_normal(sq, vec({1, 0.3})) - vec({1, 0})).norm() < 1e-15);
}

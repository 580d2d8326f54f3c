#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isocon/error.hpp"
#include "isocon/moments.hpp"
#include "isocon/search.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace isocon;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

VPolytope regular_polygon(int m) {
  PointList pts;
  for (int i = 0; i < m; ++i) {
    const double t = 2 * std::numbers::pi * i / m;
    pts.push_back(vec({std::cos(t), std::sin(t)}));
  }
  return convex_hull(pts);
}

// Circumradius-1 regular m-gon: area A = (m/2) sin(2 pi/m) and polar moment
// A (2 + cos(2 pi/m)) / 6 from the triangle fan, so L^2 = (2 + cos) / (12 A).
double regular_polygon_L(int m) {
  const double t = 2 * std::numbers::pi / m;
  const double area = 0.5 * m * std::sin(t);
  return std::sqrt((2 + std::cos(t)) / (12 * area));
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

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("isocon_test_" + name)).string();
}

const double kTriangleL = std::pow(108.0, -0.25);
const double kDiscL = 1 / (2 * std::sqrt(std::numbers::pi));

}  // namespace

TEST_CASE("regular polygons") {
  const auto tri = evaluate_candidate(regular_polygon(3));
  CHECK(tri.L_K == doctest::Approx(kTriangleL).epsilon(1e-12));
  REQUIRE(tri.vertices.size() == 3);
  for (const auto& v : tri.vertices) CHECK(v.sphere_residual == doctest::Approx(tri.vertices[0].sphere_residual).epsilon(1e-12));

  const VPolytope square = convex_hull(PointList{vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})});
  const auto sq = evaluate_candidate(square);
  REQUIRE(sq.vertices.size() == 4);
  for (const auto& v : sq.vertices) {
    CHECK(v.sphere_residual == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK_FALSE(v.strictly_convex);
    CHECK(v.curvature == "cone");
  }
  for (const auto& f : sq.faces) CHECK(f.alignment < 1e-12);

  double prev = 1.0;
  for (int m = 3; m <= 40; ++m) {
    const double L = evaluate_candidate(regular_polygon(m)).L_K;
    CHECK(L == doctest::Approx(regular_polygon_L(m)).epsilon(1e-12));
    CHECK(L < prev);
    CHECK(L > kDiscL);
    prev = L;
  }
  CHECK(prev - kDiscL < 2e-3);
}

TEST_CASE("config validation") {
  SearchConfig c;
  c.n = 3;
  c.vertex_count = 3;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c.vertex_count = 5;
  c.symmetric = true;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c.vertex_count = 6;
  CHECK_NOTHROW(c.validate());
  c.step_decay = 1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(Json{{"n", 2}, {"bogus", 1}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(Json{{"n", 2}, {"mode", "sideways"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(Json{{"n", "two"}}); }) == ErrorCode::InvalidArgument);
  SearchConfig d;
  d.mode = SearchMode::Minimize;
  d.seed = 99;
  const SearchConfig e = config_from_json(config_to_json(d));
  CHECK(e.mode == SearchMode::Minimize);
  CHECK(e.seed == 99);
}

TEST_CASE("accepted L is strictly monotone") {
  for (SearchMode mode : {SearchMode::Maximize, SearchMode::Minimize}) {
    SearchConfig c;
    c.n = 2;
    c.vertex_count = 7;
    c.mode = mode;
    c.max_iterations = 1500;
    c.seed = 4;
    const RunLog log = hill_climb(c);
    REQUIRE(log.records.size() == 1500);
    double last = std::numeric_limits<double>::quiet_NaN();
    int accepted = 0;
    for (const auto& r : log.records) {
      if (!r.accepted) {
        if (!std::isnan(last)) CHECK(r.L_K == last);
        continue;
      }
      ++accepted;
      if (!std::isnan(last)) CHECK((mode == SearchMode::Maximize ? r.L_K > last : r.L_K < last));
      last = r.L_K;
    }
    CHECK(accepted > 10);
    CHECK(static_cast<int>(log.final_body.vertices().size()) == 7);
    CHECK(check_isotropic(log.final_body, 1e-6).passed);
    for (std::size_t i = 1; i < log.records.size(); ++i) CHECK(log.records[i].step <= log.records[i - 1].step);
  }
}

TEST_CASE("triangle is affinely rigid") {
  SearchConfig c;
  c.n = 2;
  c.vertex_count = 3;
  c.mode = SearchMode::Maximize;
  c.max_iterations = 500;
  const RunLog log = hill_climb(c);
  for (const auto& r : log.records) CHECK(r.L_K == doctest::Approx(kTriangleL).epsilon(1e-9));
}

TEST_CASE("minimizing approaches the disc") {
  SearchConfig c;
  c.n = 2;
  c.vertex_count = 12;
  c.mode = SearchMode::Minimize;
  c.max_iterations = 4000;
  c.seed = 8;
  const RunLog log = hill_climb(c);
  CHECK(log.records.back().L_K < kDiscL * 1.02);
  CHECK(log.records.back().L_K > kDiscL);
}

TEST_CASE("maximizing stays below the triangle") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SearchConfig c;
    c.n = 2;
    c.vertex_count = 6;
    c.mode = SearchMode::Maximize;
    c.free_count = seed == 3;
    c.max_iterations = 2000;
    c.seed = seed;
    const RunLog log = hill_climb(c);
    for (const auto& r : log.records) CHECK(r.L_K <= kTriangleL + 1e-6);
  }
}

TEST_CASE("symmetric runs stay centrally symmetric") {
  SearchConfig c;
  c.n = 3;
  c.vertex_count = 8;
  c.symmetric = true;
  c.mode = SearchMode::Minimize;
  c.max_iterations = 300;
  const RunLog log = hill_climb(c);
  const auto& v = log.final_body.vertices();
  REQUIRE(v.size() == 8);
  for (int i = 0; i < 4; ++i) CHECK((v[i] + v[i + 4]).norm() < 1e-9);
}

TEST_CASE("reproducible and lossless logs") {
  SearchConfig c;
  c.n = 3;
  c.vertex_count = 6;
  c.max_iterations = 300;
  c.seed = 21;
  const RunLog a = hill_climb(c);
  const RunLog b = hill_climb(c);
  CHECK(run_to_json(a).dump() == run_to_json(b).dump());

  const std::string path = temp_path("run.json");
  save_run(a, path);
  const RunLog back = load_run(path);
  REQUIRE(back.final_body.vertices().size() == a.final_body.vertices().size());
  for (std::size_t i = 0; i < a.final_body.vertices().size(); ++i)
    CHECK((back.final_body.vertices()[i].array() == a.final_body.vertices()[i].array()).all());
  CHECK(run_to_json(back).dump() == run_to_json(a).dump());

  std::ostringstream csv;
  write_trace_csv(csv, a);
  CHECK(csv.str().rfind("iteration,L_K,accepted,vertex,step\n", 0) == 0);

  Json wrong = run_to_json(a);
  wrong["format_version"] = 2;
  write_json(path, wrong);
  CHECK(code_of([&] { load_run(path); }) == ErrorCode::FormatVersionMismatch);

  const std::string text = run_to_json(a).dump();
  {
    std::ofstream out(path);
    out << text.substr(0, text.size() / 2);
  }
  CHECK(code_of([&] { load_run(path); }) == ErrorCode::CorruptFile);
  Json broken = run_to_json(a);
  broken["records"][0] = "x";
  write_json(path, broken);
  CHECK(code_of([&] { load_run(path); }) == ErrorCode::CorruptFile);
  std::remove(path.c_str());
}

TEST_CASE("body json round trip") {
  const std::vector<ConvexBody> bodies = {
      ConvexBody(regular_polygon(5)), ConvexBody(Ball(vec({1, 2, 3}), 0.5)),
      ConvexBody(Ellipsoid(vec({0, 1}), Mat(Vec(vec({4, 1})).asDiagonal()))),
      ConvexBody(CapModel(CapSpec::unit_scaling(3, 1.0, 0.1, 0.02, 0.1)))};
  for (const ConvexBody& b : bodies) {
    const Json j = body_to_json(b);
    const ConvexBody back = body_from_json(Json::parse(j.dump()));
    CHECK(body_to_json(back).dump() == j.dump());
    CHECK(body_moments(back).volume == doctest::Approx(body_moments(b).volume).epsilon(1e-14));
  }
  CHECK(code_of([] { body_from_json(Json{{"type", "torus"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { body_from_json(Json{{"type", "ball"}, {"center", {0, 0}}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { body_from_json(Json{{"type", "vpolytope"}, {"vertices", {{0, 0}, {1, 1}, {2, 2}}}}); }) ==
        ErrorCode::DegenerateInput);
}

#include "isocon/curvature.hpp"

#include "isocon/error.hpp"
#include "isocon/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace isocon {
namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kFlatThreshold = 1e-8;
constexpr double kConeThreshold = 0.5;
constexpr int kMaxRealign = 8;
constexpr double kFractions[] = {0.25, 0.5, 0.75, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Piece {
  Vec normal;
  double weight;
};

// Supporting pieces of the boundary through x0 with their outer unit normals.
std::vector<Piece> active_pieces(const ConvexBody& body, const Vec& x0) {
  require(x0.size() == dim(body), ErrorCode::InvalidArgument, "curvature: dimension mismatch");
  require(on_boundary(body, x0, kBoundaryTol), ErrorCode::NotOnBoundary, "curvature: point is not on the boundary");
  const double tol = kBoundaryTol * diameter(body);
  return std::visit(
      Overloaded{
          [&](const VPolytope& p) {
            std::vector<Piece> out;
            for (const Face& f : p.faces())
              if (std::abs(f.normal.dot(x0) - f.offset) <= tol) out.push_back({f.normal, f.area});
            return out;
          },
          [&](const Ball& b) { return std::vector<Piece>{{(x0 - b.center()).normalized(), 1.0}}; },
          [&](const Ellipsoid& e) {
            return std::vector<Piece>{{(e.shape_inverse() * (x0 - e.center())).normalized(), 1.0}};
          },
          [&](const CapModel& c) {
            const int m = c.dim() - 1;
            const Vec y = x0.head(m);
            std::vector<Piece> out;
            Vec g(m + 1);
            g.head(m) = 2.0 * c.quadratic() * y;
            g[m] = -1.0;
            if (std::abs(y.dot(c.quadratic() * y) - x0[m]) / g.norm() <= tol) out.push_back({g.normalized(), 1.0});
            if (std::abs(x0[m] - c.height()) <= tol) out.push_back({Vec::Unit(m + 1, m), 1.0});
            return out;
          },
      },
      body);
}

struct Fit {
  Mat q;
  double eps_hat = 0.0;
  int samples = 0;
};

Fit fit_quadratic(const ConvexBody& body, const Vec& x0, const Vec& normal, const Mat& basis, double radius) {
  const int m = static_cast<int>(basis.cols());
  std::vector<Vec> dirs;
  for (int i = 0; i < m; ++i) {
    for (double s : {1.0, -1.0}) dirs.push_back(s * Vec::Unit(m, i));
    for (int j = i + 1; j < m; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) dirs.push_back((si * Vec::Unit(m, i) + sj * Vec::Unit(m, j)) / std::sqrt(2.0));
  }

  std::vector<Vec> ys;
  std::vector<double> hs;
  for (const Vec& d : dirs) {
    for (double f : kFractions) {
      const Vec off = f * radius * d;
      const auto t = ray_entry(body, x0 + basis * off, -normal);
      if (!t) continue;
      ys.push_back(off);
      hs.push_back(*t);
    }
  }
  const int k = m * (m + 1) / 2;
  require(static_cast<int>(ys.size()) > k, ErrorCode::InvalidArgument,
          "estimate_quadratic_form: too few boundary samples at this radius");

  Mat design(ys.size(), k);
  Vec rhs(ys.size());
  for (std::size_t r = 0; r < ys.size(); ++r) {
    int c = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) design(r, c++) = (i == j ? 1.0 : 2.0) * ys[r][i] * ys[r][j];
    rhs[r] = hs[r];
  }
  const Vec coef = design.colPivHouseholderQr().solve(rhs);
  Fit fit;
  fit.q = Mat::Zero(m, m);
  int c = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) fit.q(i, j) = fit.q(j, i) = coef[c++];
  fit.samples = static_cast<int>(ys.size());
  for (std::size_t r = 0; r < ys.size(); ++r) {
    const double model = ys[r].dot(fit.q * ys[r]);
    const double e = model > 0 ? std::abs(hs[r] / model - 1.0) : std::numeric_limits<double>::infinity();
    fit.eps_hat = std::max(fit.eps_hat, e);
  }
  return fit;
}

CurvatureEstimate fit_at(const ConvexBody& body, const Vec& x0, double radius) {
  const int n = dim(body);
  const double diam = diameter(body);
  require(radius > 0 && radius < diam / 4, ErrorCode::InvalidArgument,
          "estimate_quadratic_form: radius must lie in (0, diam/4)");
  CurvatureEstimate est;
  est.normal = outer_normal(body, x0);
  est.radius = radius;
  const Mat frame = Eigen::HouseholderQR<Mat>(est.normal).householderQ();
  est.tangent_basis = frame.rightCols(n - 1);

  Fit fit = fit_quadratic(body, x0, est.normal, est.tangent_basis, radius);
  const double flat = kFlatThreshold / radius;
  for (int it = 0; it < kMaxRealign; ++it) {
    Eigen::SelfAdjointEigenSolver<Mat> es(fit.q);
    if (es.eigenvalues().minCoeff() < flat) break;
    const Mat off = fit.q - Mat(fit.q.diagonal().asDiagonal());
    if (off.norm() <= 1e-14 * fit.q.norm() && it > 0) break;
    est.tangent_basis = est.tangent_basis * es.eigenvectors();
    fit = fit_quadratic(body, x0, est.normal, est.tangent_basis, radius);
  }
  est.q = fit.q;
  est.eps_hat = fit.eps_hat;
  est.samples = fit.samples;
  const double lo = Eigen::SelfAdjointEigenSolver<Mat>(fit.q).eigenvalues().minCoeff();
  if (lo < flat)
    est.verdict = CurvatureVerdict::Flat;
  else if (est.eps_hat > kConeThreshold)
    est.verdict = CurvatureVerdict::Cone;
  else
    est.verdict = CurvatureVerdict::Curved;
  return est;
}

}  // namespace

Mat CurvatureEstimate::ambient_form() const { return tangent_basis * q * tangent_basis.transpose(); }

Vec outer_normal(const ConvexBody& body, const Vec& x0) {
  const auto pieces = active_pieces(body, x0);
  require(!pieces.empty(), ErrorCode::NotOnBoundary, "outer_normal: no supporting face through the point");
  Vec sum = Vec::Zero(x0.size());
  for (const Piece& p : pieces) sum += p.weight * p.normal;
  require(sum.norm() > 0, ErrorCode::NonUniqueNormal, "outer_normal: active normals cancel");
  return sum.normalized();
}

int active_face_count(const ConvexBody& body, const Vec& x0) {
  return static_cast<int>(active_pieces(body, x0).size());
}

CurvatureEstimate estimate_quadratic_form(const ConvexBody& body, const Vec& x0, double radius) {
  CurvatureEstimate est = fit_at(body, x0, radius);
  require(est.verdict != CurvatureVerdict::Flat, ErrorCode::FlatPoint,
          "estimate_quadratic_form: no positive curvature detected");
  return est;
}

CurvatureEstimate probe_curvature(const ConvexBody& body, const Vec& x0, double radius) {
  return fit_at(body, x0, radius);
}

bool strict_convexity_test(const ConvexBody& body, const Vec& x0, double tol) {
  require(x0.size() == dim(body), ErrorCode::InvalidArgument, "strict_convexity_test: dimension mismatch");
  require(on_boundary(body, x0, tol), ErrorCode::NotOnBoundary, "strict_convexity_test: point is not on the boundary");
  return std::visit(Overloaded{
                        [](const VPolytope&) { return false; },
                        [](const Ball&) { return true; },
                        [](const Ellipsoid&) { return true; },
                        [&](const CapModel& c) { return x0[c.dim() - 1] < c.height() - tol * diameter(body); },
                    },
                    body);
}

double normal_alignment(const ConvexBody& body, const Vec& x0) {
  const auto pieces = active_pieces(body, x0);
  const MomentData mom = body_moments(body);
  require(mom.centroid().norm() <= 1e-9 * diameter(body), ErrorCode::InvalidArgument,
          "normal_alignment: centroid must be at the origin");
  require(pieces.size() == 1, ErrorCode::NonUniqueNormal, "normal_alignment: the normal at this point is not unique");
  const double c = pieces.front().normal.dot(x0) / x0.norm();
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::string to_string(CurvatureVerdict v) {
  switch (v) {
    case CurvatureVerdict::Curved: return "curved";
    case CurvatureVerdict::Flat: return "flat";
    case CurvatureVerdict::Cone: return "cone";
  }
  return "unknown";
}

}  // namespace isocon

#include "isocon/moments.hpp"

#include "isocon/error.hpp"
#include "isocon/quadrature.hpp"

#include <cmath>

namespace isocon {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

MomentData ellipsoid_moments(const Vec& center, const Mat& shape_sqrt) {
  // Push the unit ball forward through x -> shape_sqrt x + center.
  const int n = static_cast<int>(center.size());
  MomentData unit = MomentData::zero(n);
  unit.volume = unit_ball_volume(n);
  unit.second = Mat::Identity(n, n) * (unit.volume / (n + 2));
  return unit.transformed(shape_sqrt, center);
}

struct CapIntegrals {
  double volume;
  double y1;
  double y2;
  double radial2;
};

// Integrals over {|Z|^2 <= y <= h} in R^{m+1}, with Z = sqrt(h) s theta and
// y = h z. The region becomes s in [0,1], z in [s^2, 1].
CapIntegrals cap_integrals(int m, double h, int nodes) {
  const auto& rule = gauss_legendre(nodes);
  const double sphere = m * unit_ball_volume(m);
  const double jac = sphere * std::pow(h, 0.5 * m + 1.0);
  CapIntegrals out{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    const double ws = 0.5 * rule.weights[i];
    const double zlo = s * s;
    const double zhalf = 0.5 * (1.0 - zlo);
    const double radial = std::pow(s, m - 1);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double z = zlo + zhalf * (rule.nodes[j] + 1.0);
      const double w = jac * ws * radial * zhalf * rule.weights[j];
      out.volume += w;
      out.y1 += w * h * z;
      out.y2 += w * h * h * z * z;
      out.radial2 += w * h * s * s;
    }
  }
  return out;
}

MomentData cap_moments(const CapModel& cap, const MomentOptions& options) {
  const int n = cap.dim();
  const int m = n - 1;
  const double h = cap.height();
  const CapIntegrals fine = cap_integrals(m, h, options.cap_nodes);
  const CapIntegrals coarse = cap_integrals(m, h, std::max(2, options.cap_nodes / 2));
  const double err = std::max({std::abs(fine.volume - coarse.volume), std::abs(fine.y1 - coarse.y1),
                               std::abs(fine.y2 - coarse.y2), std::abs(fine.radial2 - coarse.radial2)});
  require(err <= options.cap_abs_tol, ErrorCode::QuadratureFailure,
          "body_moments: cap quadrature did not reach the requested tolerance");

  // Y = Q^{-1/2} Z, so dY = det(Q)^{-1/2} dZ and Y Y^T = Q^{-1/2} Z Z^T Q^{-1/2}.
  const Mat q = cap.quadratic();
  const double jac = 1.0 / std::sqrt(q.determinant());
  MomentData out = MomentData::zero(n);
  out.volume = jac * fine.volume;
  out.first(n - 1) = jac * fine.y1;
  out.second.topLeftCorner(m, m) = cap.quadratic_inverse() * (jac * fine.radial2 / m);
  out.second(n - 1, n - 1) = jac * fine.y2;
  return out;
}

}  // namespace

MomentData MomentData::zero(int n) {
  return MomentData{0.0, Vec::Zero(n), Mat::Zero(n, n)};
}

Vec MomentData::centroid() const {
  require(volume > 0.0, ErrorCode::DegenerateBody, "centroid of a body with zero volume");
  return first / volume;
}

Mat MomentData::centered_second() const {
  require(volume > 0.0, ErrorCode::DegenerateBody, "centered moment of a body with zero volume");
  Mat c = second - first * first.transpose() / volume;
  return 0.5 * (c + c.transpose());
}

MomentData MomentData::transformed(const Mat& a, const Vec& t) const {
  const double jac = std::abs(a.determinant());
  MomentData out;
  out.volume = jac * volume;
  const Vec af = a * first;
  out.first = jac * (af + volume * t);
  Mat s = a * second * a.transpose() + af * t.transpose() + t * af.transpose() + volume * t * t.transpose();
  out.second = jac * 0.5 * (s + s.transpose());
  return out;
}

MomentData& MomentData::operator+=(const MomentData& o) {
  volume += o.volume;
  first += o.first;
  second += o.second;
  return *this;
}

MomentData& MomentData::operator-=(const MomentData& o) {
  volume -= o.volume;
  first -= o.first;
  second -= o.second;
  return *this;
}

namespace {

// Moments of a simplex with the given (nonnegative) volume.
MomentData simplex_moments_with(const Simplex& s, double vol) {
  const int n = static_cast<int>(s.points.size()) - 1;
  Vec sum = Vec::Zero(n);
  Mat outer = Mat::Zero(n, n);
  for (const auto& v : s.points) {
    sum += v;
    outer += v * v.transpose();
  }
  MomentData out;
  out.volume = vol;
  out.first = vol * sum / (n + 1);
  out.second = vol * (outer + sum * sum.transpose()) / ((n + 1.0) * (n + 2.0));
  return out;
}

double simplex_volume(const Simplex& s) {
  const int n = static_cast<int>(s.points.size()) - 1;
  require(n >= 1, ErrorCode::DegenerateInput, "simplex_moments: empty simplex");
  Mat edges(n, n);
  for (int k = 0; k < n; ++k) {
    require(s.points[k + 1].size() == n, ErrorCode::InvalidArgument, "simplex_moments: dimension mismatch");
    edges.col(k) = s.points[k + 1] - s.points[0];
  }
  return std::abs(edges.determinant()) / factorial(n);
}

}  // namespace

MomentData simplex_moments(const Simplex& s) {
  const double vol = simplex_volume(s);
  require(vol >= 1e-300, ErrorCode::DegenerateInput, "simplex_moments: degenerate simplex");
  return simplex_moments_with(s, vol);
}

MomentData body_moments(const ConvexBody& body, const MomentOptions& options) {
  if (const auto* p = std::get_if<VPolytope>(&body)) {
    MomentData total = MomentData::zero(p->dim());
    // Exact hulls of clipped polytopes can carry sliver facets whose cones
    // have zero volume in floating point; they contribute nothing.
    for (const auto& s : triangulate(*p)) {
      const double vol = simplex_volume(s);
      if (vol >= 1e-300) total += simplex_moments_with(s, vol);
    }
    return total;
  }
  if (const auto* b = std::get_if<Ball>(&body)) {
    const int n = b->dim();
    return ellipsoid_moments(b->center(), Mat::Identity(n, n) * b->radius());
  }
  if (const auto* e = std::get_if<Ellipsoid>(&body)) return ellipsoid_moments(e->center(), e->shape_sqrt());
  return cap_moments(std::get<CapModel>(body), options);
}

}  // namespace isocon

#include "isocon/body.hpp"

#include "isocon/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isocon {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(int n, const char* who) {
  require(n >= kMinDim && n <= kMaxDim, ErrorCode::InvalidArgument, std::string(who) + ": dimension must be in [2, 6]");
}

// Interval of t where alpha t^2 + beta t + gamma <= 0, intersected with [lo, hi].
bool quadratic_nonpositive(double alpha, double beta, double gamma, double& lo, double& hi) {
  if (alpha == 0.0) {
    if (beta == 0.0) return gamma <= 0.0;
    const double root = -gamma / beta;
    if (beta > 0) hi = std::min(hi, root);
    else lo = std::max(lo, root);
    return lo <= hi;
  }
  const double disc = beta * beta - 4.0 * alpha * gamma;
  if (disc < 0) return false;
  const double sq = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double qv = -0.5 * (beta + std::copysign(sq, beta));
  double r1 = qv / alpha;
  double r2 = qv != 0.0 ? gamma / qv : -r1;
  if (r1 > r2) std::swap(r1, r2);
  lo = std::max(lo, r1);
  hi = std::min(hi, r2);
  return lo <= hi;
}

}  // namespace

Ball::Ball(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
  check_dim(dim(), "Ball");
  require(radius_ > 0 && std::isfinite(radius_), ErrorCode::InvalidArgument, "Ball: radius must be positive");
}

Ellipsoid::Ellipsoid(Vec center, Mat shape) : center_(std::move(center)), shape_(std::move(shape)) {
  check_dim(dim(), "Ellipsoid");
  require(shape_.rows() == dim() && shape_.cols() == dim(), ErrorCode::InvalidArgument, "Ellipsoid: shape size");
  require((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * shape_.cwiseAbs().maxCoeff(),
          ErrorCode::InvalidArgument, "Ellipsoid: shape must be symmetric");
  shape_ = 0.5 * (shape_ + shape_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(shape_);
  require(es.eigenvalues().minCoeff() > 0, ErrorCode::InvalidArgument, "Ellipsoid: shape must be positive definite");
  shape_sqrt_ = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  shape_inv_ = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

void CapSpec::validate() const {
  check_dim(n, "CapSpec");
  require(lambda.size() == n, ErrorCode::InvalidArgument, "CapSpec: lambda must have n entries");
  require((lambda.array() > 0).all(), ErrorCode::InvalidArgument, "CapSpec: lambda must be positive");
  require(std::abs(lambda.prod() - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "CapSpec: prod(lambda) must be 1");
  require(R > 0, ErrorCode::InvalidArgument, "CapSpec: R must be positive");
  require(a > 0 && a < R / 4, ErrorCode::InvalidArgument, "CapSpec: need 0 < a < R/4");
  require(b >= 0, ErrorCode::InvalidArgument, "CapSpec: b must be nonnegative");
  require(epsilon >= 0 && epsilon < R, ErrorCode::InvalidArgument, "CapSpec: need 0 <= epsilon < R");
}

CapSpec CapSpec::unit_scaling(int n, double R, double a, double b, double epsilon) {
  CapSpec s;
  s.n = n;
  s.R = R;
  s.a = a;
  s.b = b;
  s.lambda = Vec::Ones(n);
  s.epsilon = epsilon;
  return s;
}

CapModel::CapModel(CapSpec spec, std::optional<Mat> perturbation) : spec_(std::move(spec)) {
  spec_.validate();
  const int m = spec_.n - 1;
  perturbation_ = perturbation.value_or(Mat::Zero(m, m));
  require(perturbation_.rows() == m && perturbation_.cols() == m, ErrorCode::InvalidArgument,
          "CapModel: perturbation must be (n-1)x(n-1)");
  require((perturbation_ - perturbation_.transpose()).cwiseAbs().maxCoeff() <= 1e-12, ErrorCode::InvalidArgument,
          "CapModel: perturbation must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat::Identity(m, m) + perturbation_);
  const double lo = spec_.R / (spec_.R + spec_.epsilon);
  const double hi = spec_.R / (spec_.R - spec_.epsilon);
  require(es.eigenvalues().minCoeff() >= lo * (1 - 1e-12) && es.eigenvalues().maxCoeff() <= hi * (1 + 1e-12),
          ErrorCode::InvalidArgument, "CapModel: perturbation leaves the [R - eps, R + eps] sandwich");

  const Vec ly = spec_.lambda.head(m);
  const double ln = spec_.lambda[m];
  const Mat p = (Mat::Identity(m, m) + perturbation_) / (2.0 * spec_.R);
  q_ = ly.asDiagonal() * p * ly.asDiagonal() / ln;
  q_ = 0.5 * (q_ + q_.transpose());
  q_inv_ = q_.inverse();
  height_ = spec_.a / ln;
}

Mat CapModel::nominal_quadratic() const {
  const int m = spec_.n - 1;
  const Vec ly = spec_.lambda.head(m);
  return ly.asDiagonal() * Mat::Identity(m, m) * ly.asDiagonal() / (2.0 * spec_.R * spec_.lambda[m]);
}

int dim(const ConvexBody& body) {
  return std::visit([](const auto& k) { return k.dim(); }, body);
}

double diameter(const ConvexBody& body) {
  return std::visit(Overloaded{
                        [](const VPolytope& p) { return p.diameter(); },
                        [](const Ball& b) { return 2.0 * b.radius(); },
                        [](const Ellipsoid& e) {
                          return 2.0 * std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(e.shape()).eigenvalues().maxCoeff());
                        },
                        [&](const CapModel&) {
                          // Box diagonal: an upper bound within a factor sqrt(n).
                          const Box box = bounding_box(body);
                          return (box.hi - box.lo).norm();
                        },
                    },
                    body);
}

SupportResult support(const ConvexBody& body, const Vec& u) {
  require(u.size() == dim(body), ErrorCode::InvalidArgument, "support: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const VPolytope& p) {
            const auto& v = p.vertices();
            std::size_t best = 0;
            double val = u.dot(v[0]);
            for (std::size_t i = 1; i < v.size(); ++i) {
              const double d = u.dot(v[i]);
              if (d > val) {
                val = d;
                best = i;
              }
            }
            return SupportResult{val, v[best]};
          },
          [&](const Ball& b) {
            const double nu = u.norm();
            return SupportResult{u.dot(b.center()) + b.radius() * nu, b.center() + b.radius() * u / nu};
          },
          [&](const Ellipsoid& e) {
            const Vec su = e.shape() * u;
            const double w = std::sqrt(u.dot(su));
            return SupportResult{u.dot(e.center()) + w, e.center() + su / w};
          },
          [&](const CapModel& c) {
            const int m = c.dim() - 1;
            const Vec uy = u.head(m);
            const double un = u[m];
            const double h = c.height();
            const Vec qiu = c.quadratic_inverse() * uy;
            const double w = uy.dot(qiu);
            Vec pt(m + 1);
            auto rim = [&]() {
              if (w <= 0) {
                pt.head(m).setZero();
                pt[m] = h;
                return SupportResult{un * h, pt};
              }
              pt.head(m) = std::sqrt(h / w) * qiu;
              pt[m] = h;
              return SupportResult{std::sqrt(h * w) + un * h, pt};
            };
            if (un >= 0) return rim();
            const Vec ys = -qiu / (2.0 * un);
            const double yv = w / (4.0 * un * un);
            if (yv > h) return rim();
            pt.head(m) = ys;
            pt[m] = yv;
            return SupportResult{-w / (4.0 * un), pt};
          },
      },
      body);
}

double boundary_gap(const ConvexBody& body, const Vec& x) {
  return std::visit(Overloaded{
                        [&](const VPolytope& p) { return p.signed_gap(x); },
                        [&](const Ball& b) { return (x - b.center()).norm() - b.radius(); },
                        [&](const Ellipsoid& e) {
                          const Vec d = x - e.center();
                          const double rho = std::sqrt(d.dot(e.shape_inverse() * d));
                          const double smin = Eigen::SelfAdjointEigenSolver<Mat>(e.shape()).eigenvalues().minCoeff();
                          return (rho - 1.0) * std::sqrt(smin);
                        },
                        [&](const CapModel& c) {
                          const int m = c.dim() - 1;
                          const Vec y = x.head(m);
                          const Vec grad = 2.0 * c.quadratic() * y;
                          const double g1 = (y.dot(c.quadratic() * y) - x[m]) / std::sqrt(1.0 + grad.squaredNorm());
                          const double g2 = x[m] - c.height();
                          return std::max(g1, g2);
                        },
                    },
                    body);
}

bool contains(const ConvexBody& body, const Vec& x, double tol) { return boundary_gap(body, x) <= tol; }

bool on_boundary(const ConvexBody& body, const Vec& x, double rel_tol) {
  return std::abs(boundary_gap(body, x)) <= rel_tol * diameter(body);
}

std::optional<double> ray_entry(const ConvexBody& body, const Vec& origin, const Vec& dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = inf;
  const bool hit = std::visit(
      Overloaded{
          [&](const VPolytope& p) {
            const Vec nd = p.face_normals() * dir;
            const Vec gap = p.face_offsets() - p.face_normals() * origin;
            for (Eigen::Index i = 0; i < nd.size(); ++i) {
              if (nd[i] == 0.0) {
                if (gap[i] < 0) return false;
              } else if (nd[i] > 0) {
                hi = std::min(hi, gap[i] / nd[i]);
              } else {
                lo = std::max(lo, gap[i] / nd[i]);
              }
            }
            return lo <= hi;
          },
          [&](const Ball& b) {
            const Vec d = origin - b.center();
            return quadratic_nonpositive(dir.squaredNorm(), 2.0 * d.dot(dir), d.squaredNorm() - b.radius() * b.radius(),
                                         lo, hi);
          },
          [&](const Ellipsoid& e) {
            const Vec d = origin - e.center();
            const Vec sd = e.shape_inverse() * dir;
            return quadratic_nonpositive(dir.dot(sd), 2.0 * d.dot(sd), d.dot(e.shape_inverse() * d) - 1.0, lo, hi);
          },
          [&](const CapModel& c) {
            const int m = c.dim() - 1;
            const Vec oy = origin.head(m);
            const Vec dy = dir.head(m);
            const Mat& q = c.quadratic();
            if (!quadratic_nonpositive(dy.dot(q * dy), 2.0 * oy.dot(q * dy) - dir[m], oy.dot(q * oy) - origin[m], lo, hi))
              return false;
            return quadratic_nonpositive(0.0, dir[m], origin[m] - c.height(), lo, hi);
          },
      },
      body);
  if (!hit) return std::nullopt;
  return lo;
}

ConvexBody apply_affine(const ConvexBody& body, const Mat& a, const Vec& t) {
  const int n = dim(body);
  require(a.rows() == n && a.cols() == n && t.size() == n, ErrorCode::InvalidArgument, "apply_affine: size mismatch");
  require(std::abs(a.determinant()) > 0, ErrorCode::InvalidArgument, "apply_affine: map must be invertible");
  return std::visit(Overloaded{
                        [&](const VPolytope& p) -> ConvexBody {
                          PointList pts;
                          pts.reserve(p.vertices().size());
                          for (const auto& v : p.vertices()) pts.push_back(a * v + t);
                          return convex_hull(pts);
                        },
                        [&](const Ball& b) -> ConvexBody {
                          const Mat ata = a.transpose() * a;
                          const double s2 = ata.trace() / n;
                          if ((ata - s2 * Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12 * s2)
                            return Ball(a * b.center() + t, std::sqrt(s2) * b.radius());
                          return Ellipsoid(a * b.center() + t, b.radius() * b.radius() * a * a.transpose());
                        },
                        [&](const Ellipsoid& e) -> ConvexBody {
                          Mat s = a * e.shape() * a.transpose();
                          s = 0.5 * (s + s.transpose());
                          return Ellipsoid(a * e.center() + t, s);
                        },
                        [&](const CapModel&) -> ConvexBody {
                          throw Error(ErrorCode::Unsupported, "apply_affine: cap models are not closed under affine maps");
                        },
                    },
                    body);
}

Box bounding_box(const ConvexBody& body) {
  const int n = dim(body);
  Box box{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    box.hi[i] = support(body, e).value;
    box.lo[i] = -support(body, -e).value;
  }
  return box;
}

}  // namespace isocon

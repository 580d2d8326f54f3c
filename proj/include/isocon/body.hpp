#pragma once

#include "isocon/polytope.hpp"
#include "isocon/types.hpp"

#include <optional>
#include <variant>

namespace isocon {

/// Euclidean ball.
class Ball {
 public:
  Ball(Vec center, double radius);
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  int dim() const { return static_cast<int>(center_.size()); }

 private:
  Vec center_;
  double radius_;
};

/// {x : (x - c)^T S^{-1} (x - c) <= 1} for a symmetric positive definite S.
class Ellipsoid {
 public:
  Ellipsoid(Vec center, Mat shape);
  const Vec& center() const { return center_; }
  const Mat& shape() const { return shape_; }
  const Mat& shape_inverse() const { return shape_inv_; }
  const Mat& shape_sqrt() const { return shape_sqrt_; }  // symmetric square root
  int dim() const { return static_cast<int>(center_.size()); }

 private:
  Vec center_;
  Mat shape_;
  Mat shape_inv_;
  Mat shape_sqrt_;
};

/// Paraboloid-cap parameters: curvature radius R, cut parameter a, centroid
/// height b, diagonal volume-preserving scaling lambda, sandwich tolerance eps.
struct CapSpec {
  int n = 2;
  double R = 1.0;
  double a = 0.01;
  double b = 0.0;
  Vec lambda;
  double epsilon = 0.0;

  /// Throws InvalidArgument unless prod(lambda) = 1 to 1e-12, 0 < a < R/4,
  /// b >= 0 and 0 <= epsilon < R.
  void validate() const;
  static CapSpec unit_scaling(int n, double R, double a, double b = 0.0, double epsilon = 0.0);
};

/// The cap {(Y, y) : Y^T P Y <= y <= a} with P = (I + E) / (2R), mapped back
/// through Lambda^{-1}. E is an optional symmetric perturbation whose effect on
/// the curvature radius stays within [R - eps, R + eps].
///
/// In body coordinates the set is {(Y, y) : Y^T Q Y <= y <= h}, apex at the
/// origin, inner normal +e_n.
class CapModel {
 public:
  explicit CapModel(CapSpec spec, std::optional<Mat> perturbation = std::nullopt);

  const CapSpec& spec() const { return spec_; }
  const Mat& perturbation() const { return perturbation_; }
  int dim() const { return spec_.n; }
  const Mat& quadratic() const { return q_; }
  const Mat& quadratic_inverse() const { return q_inv_; }
  double height() const { return height_; }
  /// Quadratic form of the unperturbed model in body coordinates.
  Mat nominal_quadratic() const;

 private:
  CapSpec spec_;
  Mat perturbation_;
  Mat q_;
  Mat q_inv_;
  double height_;
};

using ConvexBody = std::variant<VPolytope, Ball, Ellipsoid, CapModel>;

int dim(const ConvexBody& body);
double diameter(const ConvexBody& body);

struct SupportResult {
  double value;
  Vec point;
};

/// h_K(u) and a maximizer; polytope ties go to the lowest vertex index.
SupportResult support(const ConvexBody& body, const Vec& u);

/// Zero on the boundary, negative inside, positive outside. Equal to the
/// Euclidean signed distance for polytopes (inside) and balls.
double boundary_gap(const ConvexBody& body, const Vec& x);
bool contains(const ConvexBody& body, const Vec& x, double tol = 0.0);
bool on_boundary(const ConvexBody& body, const Vec& x, double rel_tol = 1e-9);

/// Smallest t >= 0 with origin + t dir in K, if the ray meets K.
std::optional<double> ray_entry(const ConvexBody& body, const Vec& origin, const Vec& dir);

/// Image of K under x -> A x + t (A invertible). CapModel is not closed under
/// general affine maps and throws Unsupported.
ConvexBody apply_affine(const ConvexBody& body, const Mat& a, const Vec& t);

struct Box {
  Vec lo;
  Vec hi;
};
Box bounding_box(const ConvexBody& body);

}  // namespace isocon

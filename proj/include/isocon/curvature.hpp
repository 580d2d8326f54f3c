#pragma once

#include "isocon/body.hpp"
#include "isocon/types.hpp"

#include <string>

namespace isocon {

enum class CurvatureVerdict { Curved, Flat, Cone };

/// Local description of the boundary near X0 as the graph y = q(Y) over the
/// tangent plane, y measured along the inner normal -normal.
struct CurvatureEstimate {
  Vec normal;          // outer unit normal
  Mat tangent_basis;   // n x (n-1), orthonormal, columns span normal^perp
  Mat q;               // in tangent_basis coordinates, units 1/length
  double eps_hat = 0;  // max over samples of |y / q(Y) - 1|
  double radius = 0;   // largest tangential offset sampled
  int samples = 0;
  CurvatureVerdict verdict = CurvatureVerdict::Curved;

  /// T q T^T; independent of the tangent basis chosen.
  Mat ambient_form() const;
};

/// Outer normal at a boundary point: area-weighted mean of the active face
/// normals for polytopes, the gradient direction for smooth pieces.
/// Throws NotOnBoundary.
Vec outer_normal(const ConvexBody& body, const Vec& x0);

/// Number of distinct supporting hyperplanes through x0 (1 for smooth points).
int active_face_count(const ConvexBody& body, const Vec& x0);

/// Ray-shoots along -normal from tangential offsets at 1/4, 1/2, 3/4 and 1 of
/// `radius` in the directions +-e_i and (+-e_i +- e_j)/sqrt 2, then fits y
/// against the quadratic monomials of Y by least squares. The tangent basis is
/// re-aligned with the principal axes of the fit until it is stable.
/// Throws NotOnBoundary, InvalidArgument (radius outside (0, diam/4)), and
/// FlatPoint when the smallest eigenvalue is below 1e-8 / radius.
CurvatureEstimate estimate_quadratic_form(const ConvexBody& body, const Vec& x0, double radius);

/// Same fit, reporting a flat point through the verdict instead of throwing.
CurvatureEstimate probe_curvature(const ConvexBody& body, const Vec& x0, double radius);

/// True iff no nondegenerate boundary segment contains x0, endpoints
/// included. Polytope boundary points always lie on an edge, so the answer
/// there is false. `tol` is relative to the diameter.
bool strict_convexity_test(const ConvexBody& body, const Vec& x0, double tol = 1e-9);

/// Angle between the outer normal at x0 and x0 itself, for a body with its
/// centroid at the origin. Throws NonUniqueNormal at polytope ridges and
/// vertices and at the rim of a cap model.
double normal_alignment(const ConvexBody& body, const Vec& x0);

std::string to_string(CurvatureVerdict v);

}  // namespace isocon

#pragma once

#include "isocon/body.hpp"
#include "isocon/moments.hpp"
#include "isocon/types.hpp"

#include <cstdint>

namespace isocon {

/// x -> A (x + translation) puts K in isotropic position.
struct IsotropicFrame {
  Vec translation;  // -g(K)
  Mat A;            // symmetric, det A = 1
  double M_K = 0.0;
  double L_K = 0.0;

  Vec apply(const Vec& x) const { return A * (x + translation); }
  /// Offset t of the same map written as x -> A x + t.
  Vec offset() const { return A * translation; }
};

/// Condition number of the centered second moment above which a body is
/// treated as degenerate.
inline constexpr double kMaxMomentCondition = 1e12;

/// A = c M_c^{-1/2} with c chosen so that det A = 1. The symmetric root is
/// unique, so no eigenbasis convention is needed. Throws DegenerateBody.
IsotropicFrame isotropic_frame(const ConvexBody& body);
IsotropicFrame isotropic_frame(const MomentData& moments);

/// L_K^{2n} = det(centered second moment) / |K|^{n+2}.
double isotropy_constant(const ConvexBody& body);
double isotropy_constant(const MomentData& moments);

/// L of the Euclidean ball in R^n, the minimum over all convex bodies.
double ball_isotropy_constant(int n);

struct IsotropyReport {
  double M_K = 0.0;
  double L_K = 0.0;
  /// max |first moment entry| divided by trace(M)/n.
  double first_moment_resid = 0.0;
  /// max |M - (trace(M)/n) I| entry divided by trace(M)/n, M about the origin.
  double isotropy_resid = 0.0;
  bool passed = false;
};

IsotropyReport check_isotropic(const ConvexBody& body, double tol);
IsotropyReport check_isotropic(const MomentData& moments, double tol);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Sample covariance and acceptance-rate volume pushed through the same
/// determinant formula, with a delta-method standard error.
McEstimate mc_isotropy_constant(const ConvexBody& body, std::int64_t count, std::uint64_t seed);

/// The body moved by its isotropic frame.
ConvexBody isotropic_image(const ConvexBody& body, const IsotropicFrame& frame);
ConvexBody isotropic_image(const ConvexBody& body);

}  // namespace isocon

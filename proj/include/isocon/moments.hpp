#pragma once

#include "isocon/body.hpp"
#include "isocon/polytope.hpp"
#include "isocon/types.hpp"

namespace isocon {

/// Volume, first moment and second moment about the current origin.
struct MomentData {
  double volume = 0.0;
  Vec first;
  Mat second;

  static MomentData zero(int n);
  int dim() const { return static_cast<int>(first.size()); }
  Vec centroid() const;
  /// second - first first^T / volume
  Mat centered_second() const;
  /// Moments of the image {A x + t : x in K}.
  MomentData transformed(const Mat& a, const Vec& t) const;

  MomentData& operator+=(const MomentData& o);
  MomentData& operator-=(const MomentData& o);
  friend MomentData operator+(MomentData l, const MomentData& r) { return l += r; }
  friend MomentData operator-(MomentData l, const MomentData& r) { return l -= r; }
};

/// Exact monomial integrals over a simplex. Throws DegenerateInput when the
/// volume underflows below 1e-300.
MomentData simplex_moments(const Simplex& s);

struct MomentOptions {
  /// Absolute tolerance for the quadrature used on CapModel bodies.
  double cap_abs_tol = 1e-12;
  int cap_nodes = 64;
};

MomentData body_moments(const ConvexBody& body, const MomentOptions& options = {});

}  // namespace isocon

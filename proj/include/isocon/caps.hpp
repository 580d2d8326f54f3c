#pragma once

#include "isocon/body.hpp"
#include "isocon/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace isocon {

/// Model regions in the cap frame (Y, y), boundary y = |Y|^2 / 2R:
///   Slab  D_a = {|Y|^2 / 2R <= y <= a}
///   Cone  C_a = points of conv(boundary patch, (0, -a)) below the boundary.
enum class CapRegion { Slab, Cone };

/// Integrand 1 (volume), or |L^{-1}(X - G)|^2 - |L^{-1} G|^2 with G = (0, b),
/// L = diag(lambda).
enum class CapIntegrand { One, Psi };

/// Closed form for psi or phi. `value` is exact for the model boundary;
/// `leading` is the a^{(n+3)/2} term and `correction_bound` bounds the rest
/// relative to it: |value - leading| <= correction_bound * |leading|.
struct CapFormulaResult {
  double value = 0.0;
  double leading = 0.0;
  double leading_coefficient = 0.0;  // leading / a^{(n+3)/2}
  double correction_bound = 0.0;

  double lower() const;
  double upper() const;
  bool contains(double x) const { return x >= lower() && x <= upper(); }
};

/// (1/(n-1)) sum_{j<n} lambda_j^{-2}.
double alpha_coefficient(const CapSpec& spec);

double slab_volume_closed(const CapSpec& spec);
double cone_volume_closed(const CapSpec& spec);
CapFormulaResult psi_closed(const CapSpec& spec);
CapFormulaResult phi_closed(const CapSpec& spec);

/// Boundary y = c(theta) |Y|^2 along each direction theta of the Y-space.
/// For n >= 3, c(theta) = theta^T P theta; for n = 2 the two sides carry
/// independent coefficients.
struct BoundaryProfile {
  Mat quadratic;      // P, (n-1) x (n-1)
  double left = 0.0;  // n = 2, Y < 0

  double coefficient(const Vec& theta) const;

  /// y = |Y|^2 / (2 radius).
  static BoundaryProfile with_radius(int n, double radius);
  /// Random quadratic boundary inside the R +- eps sandwich with relative
  /// curvature deviation at most eps / R.
  static BoundaryProfile random_admissible(const CapSpec& spec, Rng& rng);
};

/// Numerical integral over the region cut from the given boundary, by
/// Gauss-Legendre in the scaled variables (s, z) and hyperspherical
/// Gauss-Legendre over directions. Throws QuadratureFailure when the
/// refinement limit is reached before the 1e-12 relative target.
double region_integral_oracle(const CapSpec& spec, CapRegion region, CapIntegrand integrand,
                              const BoundaryProfile& profile);
double region_integral_oracle(const CapSpec& spec, CapRegion region, CapIntegrand integrand);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x, double rel_slack = 0.0) const;
};

/// Envelopes of the four closed forms over radii R - eps and R + eps.
struct SandwichBounds {
  Interval slab_volume;
  Interval cone_volume;
  Interval psi;
  Interval phi;
};

SandwichBounds sandwich_bounds(const CapSpec& spec);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator<(const Rational& o) const;
  bool operator==(const Rational& o) const = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

/// c_out = (n+2)(n-3)/(n(n-1)), c_in = (n+1)/(n-1), verdict = c_out < c_in.
struct ContradictionResult {
  Rational c_out;
  Rational c_in;
  bool verdict = false;
};

ContradictionResult contradiction_coefficients(int n);

struct CapsRow {
  int n = 0;
  double R = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::string quantity;
  double closed = 0.0;
  double oracle = 0.0;
  double rel_err = 0.0;
  double order_fit = 0.0;
};

/// For each spec shape (a is overwritten by the schedule), compares every
/// closed form with the oracle and fits log(oracle) against log(a).
std::vector<CapsRow> caps_verification(const std::vector<CapSpec>& specs, const std::vector<double>& schedule);

/// a = 2^{-k}, k = 8..16.
std::vector<double> default_cap_schedule();

void write_caps_csv(std::ostream& out, const std::vector<CapsRow>& rows);

}  // namespace isocon

#pragma once

#include "isocon/body.hpp"
#include "isocon/isotropy.hpp"
#include "isocon/moments.hpp"
#include "isocon/types.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace isocon {

enum class PerturbationKind { Added, Removed };

/// A local modification of a body: a spike conv(K, X0 + t u) or a slab cut
/// {X in K : <X, u> <= h_K(u) - depth}.
struct PerturbationResult {
  ConvexBody original;
  MomentData original_moments;
  /// Absent when the modified set is not representable as a ConvexBody
  /// (balls and ellipsoids with a spike or a cut).
  std::optional<ConvexBody> perturbed;
  /// Moments of the added or removed region.
  MomentData delta;
  double delta_volume = 0.0;
  double delta_second = 0.0;  // integral of |X|^2 over the region
  Vec region_centroid;
  bool symmetric = false;

  PerturbationKind kind = PerturbationKind::Added;
  Vec base_point;  // X0 for spikes, empty for slabs
  Vec direction;
  double amount = 0.0;  // t for spikes, depth for slabs

  /// Moments of the modified body, original plus or minus delta.
  MomentData perturbed_moments() const;
};

/// Boundary tolerance for X0, relative to the diameter.
inline constexpr double kBoundaryTolerance = 1e-9;
/// Isotropy tolerance required by the expansion diagnostics.
inline constexpr double kIsotropyTolerance = 1e-6;

/// Supports polytopes, balls and ellipsoids. Throws NotOnBoundary,
/// InvalidArgument (u not outward, t <= 0) or PointInside.
PerturbationResult add_spike(const ConvexBody& body, const Vec& x0, const Vec& u, double t);

/// Removes the cap of the given depth in direction u. Throws EmptyIntersection
/// unless 0 < depth < width in direction u.
PerturbationResult cut_slab(const ConvexBody& body, const Vec& u, double depth);

/// Applies the reflected modification as well. Throws NotSymmetric when the
/// original body is not centrally symmetric about 0 at 1e-9 relative, and
/// InvalidArgument when the two regions overlap.
PerturbationResult symmetrize(const PerturbationResult& r);

/// 1 +- (delta_second / M_K^2 - (n + 2) delta_volume / |K|). Throws
/// NotIsotropic unless the original body passes check_isotropic at 1e-6.
double prop4_prediction(const IsotropicFrame& frame, const PerturbationResult& r, PerturbationKind sign);
double prop4_prediction(const IsotropicFrame& frame, const PerturbationResult& r);

/// L_{perturbed}^{2n} / L_K^{2n} from exact moments.
double exact_ratio(const PerturbationResult& r);

struct ExpansionResiduals {
  /// |det(uncentered M') - M_K^{2n} -+ M_K^{2(n-1)} delta_second|
  double lemma1 = 0.0;
  /// |det(centered M') - det(uncentered M')|
  double lemma3 = 0.0;
};

ExpansionResiduals expansion_residuals(const IsotropicFrame& frame, const PerturbationResult& r);

enum class ScheduleVariant { Slab, Spike };

struct ScheduleRow {
  double scale = 0.0;
  double delta_volume = 0.0;
  double delta_second = 0.0;
  double exact_ratio = 0.0;
  double predicted_ratio = 0.0;
  double residual = 0.0;
  double lemma1_resid = 0.0;
  double lemma3_resid = 0.0;
};

struct ErrorOrderFit {
  double slope = 0.0;         // log residual against log delta_volume
  double lemma1_slope = 0.0;  // same fit for the determinant expansion residuals
  double lemma3_slope = 0.0;
  std::vector<ScheduleRow> rows;
};

/// Least-squares slope of log y against log x.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Moves K to isotropic position, then applies the modification at each
/// scale of the schedule. Directions are pulled through the frame as
/// A^{-T} u; spikes sit at the exit point of the ray from the centroid.
/// Throws InsufficientSchedule unless there are at least 6 strictly
/// decreasing positive scales.
ErrorOrderFit prop4_error_order(const ConvexBody& body, const Vec& u, const std::vector<double>& schedule,
                                ScheduleVariant variant = ScheduleVariant::Slab);

/// Columns scale, delta_volume, delta_second, exact_ratio, predicted_ratio, residual.
void write_schedule_csv(std::ostream& out, const std::vector<ScheduleRow>& rows);

/// |X0|^2 |K| - (n + 2) M_K^2. Throws NotIsotropic or NotOnBoundary.
double sphere_condition_residual(const ConvexBody& body, const Vec& x0);

/// max |X| over {X in K : <X, u> >= alpha}. Polytopes and balls only.
/// Throws EmptyIntersection when the cap has empty interior.
double cap_max_norm(const ConvexBody& body, const Vec& u, double alpha);

/// Point where the ray from `from` along u leaves K.
Vec boundary_exit(const ConvexBody& body, const Vec& from, const Vec& u);

}  // namespace isocon

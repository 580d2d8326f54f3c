#include "isocon/sampling.hpp"

#include "isocon/error.hpp"

namespace isocon {

SampleSet sample_uniform(const ConvexBody& body, std::int64_t count, std::uint64_t seed) {
  const int n = dim(body);
  require(n >= kMinDim && n <= kMaxDim, ErrorCode::InvalidArgument, "sample_uniform: unsupported dimension");
  require(count >= 1, ErrorCode::InvalidArgument, "sample_uniform: count must be positive");
  constexpr double kMinRate = 1e-4;
  constexpr std::uint64_t kMinTrials = 100000;

  const Box box = bounding_box(body);
  Rng rng(seed);
  SampleSet out;
  out.points.resize(n, count);
  out.box_volume = (box.hi - box.lo).prod();
  Vec x(n);
  // Polytope membership dominates the cost, so it gets an allocation-free path.
  const auto* poly = std::get_if<VPolytope>(&body);
  Vec gaps(poly ? poly->face_normals().rows() : 0);
  const auto* ell = std::get_if<Ellipsoid>(&body);
  auto inside = [&](const Vec& y) {
    if (ell) {
      const Vec d = y - ell->center();
      return d.dot(ell->shape_inverse() * d) <= 1.0;
    }
    if (!poly) return contains(body, y);
    gaps.noalias() = poly->face_normals() * y;
    return (gaps - poly->face_offsets()).maxCoeff() <= 0.0;
  };
  std::int64_t accepted = 0;
  while (accepted < count) {
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(box.lo(i), box.hi(i));
    ++out.trials;
    if (inside(x)) out.points.col(accepted++) = x;
    if (out.trials >= kMinTrials && static_cast<double>(accepted) < kMinRate * static_cast<double>(out.trials))
      throw Error(ErrorCode::LowAcceptance, "sample_uniform: acceptance rate below 1e-4");
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(out.trials);
  return out;
}

}  // namespace isocon

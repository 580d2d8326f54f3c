#pragma once

#include "isocon/body.hpp"
#include "isocon/types.hpp"

#include <cstdint>

namespace isocon {

struct SampleSet {
  Mat points;  // n x count, one sample per column
  double acceptance_rate = 0.0;
  std::uint64_t trials = 0;
  /// Volume of the proposal box, so acceptance_rate * box_volume estimates |K|.
  double box_volume = 0.0;
};

/// Rejection sampling from the bounding box. Deterministic in the seed.
/// Throws LowAcceptance once at least 1e5 proposals have been drawn with an
/// acceptance rate below 1e-4.
SampleSet sample_uniform(const ConvexBody& body, std::int64_t count, std::uint64_t seed);

}  // namespace isocon

#pragma once

#include "isocon/types.hpp"

#include <span>

namespace isocon {

/// Sign of det [[p_0, 1], ..., [p_n, 1]] for n+1 points of R^n.
///
/// A floating-point evaluation is trusted when its magnitude clears a
/// Hadamard-relative threshold; otherwise the determinant is recomputed in
/// exact rational arithmetic, so the returned sign is always exact for the
/// double-precision inputs.
int orientation(std::span<const Vec* const> points);

/// Same sign computed only in exact arithmetic (used to cross-check the filter).
int orientation_exact(std::span<const Vec* const> points);

}  // namespace isocon

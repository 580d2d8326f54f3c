#include "isocon/predicates.hpp"

#include "isocon/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace isocon {
namespace {

constexpr double kFilterRelative = 1e-10;

template <int N>
int filtered_sign(std::span<const Vec* const> points, bool& certain) {
  Eigen::Matrix<double, N + 1, N + 1> m;
  for (int i = 0; i <= N; ++i) {
    m.row(i).template head<N>() = points[i]->transpose();
    m(i, N) = 1.0;
  }
  double bound = 1.0;
  for (int i = 0; i <= N; ++i) bound *= m.row(i).norm();
  const double det = m.partialPivLu().determinant();
  certain = std::abs(det) > kFilterRelative * bound;
  return (det > 0) - (det < 0);
}

}  // namespace

int orientation_exact(std::span<const Vec* const> points) {
  // Scale every coordinate column by a power of two so that all entries are
  // integers. Positive column scalings leave the sign of the determinant
  // unchanged, and Bareiss elimination then stays in the integers.
  const int n = static_cast<int>(points.size()) - 1;
  std::vector<std::vector<mpz_class>> m(n + 1, std::vector<mpz_class>(n + 1));
  for (int j = 0; j < n; ++j) {
    int min_exp = std::numeric_limits<int>::max();
    for (int i = 0; i <= n; ++i) {
      const double x = (*points[i])[j];
      if (x == 0.0) continue;
      int e = 0;
      std::frexp(x, &e);
      min_exp = std::min(min_exp, e - 53);
    }
    for (int i = 0; i <= n; ++i) {
      const double x = (*points[i])[j];
      if (x == 0.0) continue;
      int e = 0;
      const double mant = std::frexp(x, &e);
      mpz_class v(static_cast<long>(std::ldexp(mant, 53)));
      const int shift = e - 53 - min_exp;
      if (shift > 0) v <<= shift;
      m[i][j] = v;
    }
  }
  for (int i = 0; i <= n; ++i) m[i][n] = 1;

  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k <= n; ++k) {
    int pivot = -1;
    for (int r = k; r <= n; ++r) {
      if (sgn(m[r][k]) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      sign = -sign;
    }
    for (int r = k + 1; r <= n; ++r) {
      for (int c = k + 1; c <= n; ++c) {
        m[r][c] = m[k][k] * m[r][c] - m[r][k] * m[k][c];
        mpz_divexact(m[r][c].get_mpz_t(), m[r][c].get_mpz_t(), prev.get_mpz_t());
      }
      m[r][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * sgn(m[n][n]);
}

int orientation(std::span<const Vec* const> points) {
  const int n = static_cast<int>(points.size()) - 1;
  bool certain = false;
  int s = 0;
  switch (n) {
    case 1: s = filtered_sign<1>(points, certain); break;
    case 2: s = filtered_sign<2>(points, certain); break;
    case 3: s = filtered_sign<3>(points, certain); break;
    case 4: s = filtered_sign<4>(points, certain); break;
    case 5: s = filtered_sign<5>(points, certain); break;
    case 6: s = filtered_sign<6>(points, certain); break;
    default: throw Error(ErrorCode::InvalidArgument, "orientation: unsupported dimension");
  }
  return certain ? s : orientation_exact(points);
}

}  // namespace isocon

#pragma once

#include <vector>

namespace isocon {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per order by Newton iteration on P_n and cached.
const GaussLegendre& gauss_legendre(int order);

/// Integrate f over [lo, hi] with the given order.
template <class F>
double integrate_gl(F&& f, double lo, double hi, int order) {
  const auto& rule = gauss_legendre(order);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace isocon

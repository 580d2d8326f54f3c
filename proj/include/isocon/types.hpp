#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace isocon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using PointList = std::vector<Vec>;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 6;

/// Volume of the Euclidean unit ball in R^k (v_0 = 1, v_1 = 2, v_k = v_{k-2} 2 pi / k).
double unit_ball_volume(int k);

/// Deterministic random source. Doubles are built from the raw 64-bit stream
/// so that a seed reproduces the same values on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();                     // Box-Muller
  std::size_t index(std::size_t n);    // [0, n)
  Vec unit_vector(int dim);
  Vec normal_vector(int dim);

 private:
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace isocon

#include "isocon/isotropy.hpp"

#include "isocon/error.hpp"
#include "isocon/sampling.hpp"

#include <cmath>

namespace isocon {
namespace {

struct Spectrum {
  Vec values;
  Mat vectors;
};

Spectrum checked_spectrum(const Mat& centered) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(centered);
  require(eig.info() == Eigen::Success, ErrorCode::DegenerateBody, "eigen-decomposition failed");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  require(lo > 0.0 && hi <= kMaxMomentCondition * lo, ErrorCode::DegenerateBody,
          "centered second moment is numerically singular");
  return {eig.eigenvalues(), eig.eigenvectors()};
}

}  // namespace

IsotropicFrame isotropic_frame(const MomentData& m) {
  require(m.volume > 0.0, ErrorCode::DegenerateBody, "isotropic_frame: zero volume");
  const int n = m.dim();
  const Spectrum s = checked_spectrum(m.centered_second());
  const double log_det = s.values.array().log().sum();
  const double c = std::exp(log_det / (2.0 * n));
  const Vec inv_root = s.values.array().rsqrt();
  Mat a = c * s.vectors * inv_root.asDiagonal() * s.vectors.transpose();
  a = 0.5 * (a + a.transpose());

  IsotropicFrame frame;
  frame.translation = -m.centroid();
  frame.A = a;
  const Mat image = a * m.centered_second() * a.transpose();
  frame.M_K = std::sqrt(image.trace() / n);
  frame.L_K = std::exp(log_det / (2.0 * n) - (n + 2.0) / (2.0 * n) * std::log(m.volume));
  return frame;
}

IsotropicFrame isotropic_frame(const ConvexBody& body) { return isotropic_frame(body_moments(body)); }

double isotropy_constant(const MomentData& m) {
  require(m.volume > 0.0, ErrorCode::DegenerateBody, "isotropy_constant: zero volume");
  const int n = m.dim();
  const Spectrum s = checked_spectrum(m.centered_second());
  const double log_det = s.values.array().log().sum();
  return std::exp((log_det - (n + 2.0) * std::log(m.volume)) / (2.0 * n));
}

double isotropy_constant(const ConvexBody& body) { return isotropy_constant(body_moments(body)); }

double ball_isotropy_constant(int n) {
  return 1.0 / std::sqrt((n + 2.0) * std::pow(unit_ball_volume(n), 2.0 / n));
}

IsotropyReport check_isotropic(const MomentData& m, double tol) {
  const int n = m.dim();
  IsotropyReport r;
  const double scale = m.second.trace() / n;
  r.first_moment_resid = m.first.cwiseAbs().maxCoeff() / scale;
  r.isotropy_resid = (m.second - scale * Mat::Identity(n, n)).cwiseAbs().maxCoeff() / scale;
  r.passed = r.first_moment_resid <= tol && r.isotropy_resid <= tol;
  try {
    const IsotropicFrame f = isotropic_frame(m);
    r.M_K = f.M_K;
    r.L_K = f.L_K;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateBody) throw;
    r.passed = false;
  }
  return r;
}

IsotropyReport check_isotropic(const ConvexBody& body, double tol) {
  return check_isotropic(body_moments(body), tol);
}

McEstimate mc_isotropy_constant(const ConvexBody& body, std::int64_t count, std::uint64_t seed) {
  require(count >= 10000, ErrorCode::InvalidArgument, "mc_isotropy_constant: count must be at least 1e4");
  const SampleSet samples = sample_uniform(body, count, seed);
  const int n = dim(body);
  const double size = static_cast<double>(count);
  const Mat& x = samples.points;
  const Vec mean = x.rowwise().mean();
  const Mat centered = x.colwise() - mean;
  const Mat cov = centered * centered.transpose() / size;

  Eigen::LLT<Mat> llt(cov);
  require(llt.info() == Eigen::Success, ErrorCode::DegenerateBody, "sample covariance is singular");
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double p = samples.acceptance_rate;
  const double volume = p * samples.box_volume;
  // |K|^2 L^{2n} = det(covariance), since the centered moment is |K| cov.
  const double log_l = log_det / (2.0 * n) - std::log(volume) / n;

  // log det cov fluctuates like the mean squared Mahalanobis norm; the
  // volume estimate is a binomial proportion.
  const Eigen::ArrayXd d2 = llt.solve(centered).cwiseProduct(centered).colwise().sum().transpose().array();
  const double var_d2 = (d2 - d2.mean()).square().sum() / (size - 1.0);
  const double trials = static_cast<double>(samples.trials);
  const double var_log =
      var_d2 / (4.0 * n * n * size) + (1.0 - p) / (p * trials) / (static_cast<double>(n) * n);
  McEstimate out;
  out.estimate = std::exp(log_l);
  out.standard_error = out.estimate * std::sqrt(var_log);
  return out;
}

ConvexBody isotropic_image(const ConvexBody& body, const IsotropicFrame& frame) {
  return apply_affine(body, frame.A, frame.offset());
}

ConvexBody isotropic_image(const ConvexBody& body) { return isotropic_image(body, isotropic_frame(body)); }

}  // namespace isocon

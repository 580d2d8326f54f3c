#include "isocon/caps.hpp"

#include "isocon/error.hpp"
#include "isocon/perturbation.hpp"
#include "isocon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

namespace isocon {
namespace {

constexpr double kOracleTol = 1e-12;
constexpr double kPlanarTol = 1e-13;
constexpr long kMaxDirections = 1L << 24;
// Closed-form intervals are widened by this much of the term magnitudes so
// that a value sitting exactly on the edge survives rounding.
constexpr double kRoundingSlack = 1e-10;

// Surface area of S^{n-2} times (2R)^{(n-1)/2}.
double prefactor(int n, double R) {
  const int m = n - 1;
  return m * unit_ball_volume(m) * std::pow(2.0 * R, 0.5 * m);
}

// Weight exponent on lambda: 2 follows the integrand; 1 is the alternative
// kept only for the verification report.
double alpha_with(const CapSpec& spec, double exponent) {
  const int m = spec.n - 1;
  double s = 0.0;
  for (int j = 0; j < m; ++j) s += std::pow(spec.lambda[j], -exponent);
  return s / m;
}

struct Terms {
  double alpha = 0.0;  // alpha R piece
  double a = 0.0;      // the O(a) piece from the y^2 term
  double b = 0.0;      // the centroid piece

  double sum() const { return alpha + a + b; }
  double leading() const { return alpha + b; }
};

Terms psi_terms(const CapSpec& s, double R, double exponent = 2.0) {
  const double n = s.n;
  const double scale = prefactor(s.n, R) * std::pow(s.a, 0.5 * (n + 3));
  const double ln = std::pow(s.lambda[s.n - 1], -exponent);
  Terms t;
  t.alpha = scale * 2.0 * alpha_with(s, exponent) * R * (1.0 / (n + 1) - 1.0 / (n + 3));
  t.a = scale * ln * (s.a / 3.0) * (1.0 / (n - 1) - 1.0 / (n + 5));
  t.b = -scale * ln * s.b * (1.0 / (n - 1) - 1.0 / (n + 3));
  return t;
}

Terms phi_terms(const CapSpec& s, double R, double exponent = 2.0) {
  const double n = s.n;
  const double scale = prefactor(s.n, R) * std::pow(s.a, 0.5 * (n + 3));
  const double ln = std::pow(s.lambda[s.n - 1], -exponent);
  Terms t;
  t.alpha = scale * 2.0 * alpha_with(s, exponent) * R * (1.0 / (n + 1) - 2.0 / (n + 2) + 1.0 / (n + 3));
  t.a = scale * ln * (s.a / 3.0) * (1.0 / (n + 5) - 8.0 / (n + 2) + 12.0 / (n + 1) - 6.0 / n + 1.0 / (n - 1));
  t.b = -scale * ln * s.b * (1.0 / (n + 3) - 4.0 / (n + 1) + 4.0 / n - 1.0 / (n - 1));
  return t;
}

double slab_volume_at(const CapSpec& s, double R) {
  const double n = s.n;
  return prefactor(s.n, R) * std::pow(s.a, 0.5 * (n + 1)) * (1.0 / (n - 1) - 1.0 / (n + 1));
}

CapFormulaResult from_terms(const CapSpec& s, const Terms& t) {
  CapFormulaResult r;
  r.value = t.sum();
  r.leading = t.leading();
  r.leading_coefficient = r.leading / std::pow(s.a, 0.5 * (s.n + 3));
  const double slack = kRoundingSlack * (std::abs(t.alpha) + std::abs(t.a) + std::abs(t.b));
  r.correction_bound = r.leading == 0.0 ? std::numeric_limits<double>::infinity()
                                        : (std::abs(t.a) + slack) / std::abs(r.leading);
  return r;
}

// Integrals over the scaled (s, z) region of s^{m-1} times 1, s^2, z^2, z.
struct ScaledMoments {
  double one = 0.0;
  double s2 = 0.0;
  double z2 = 0.0;
  double z1 = 0.0;
};

ScaledMoments scaled_moments(int m, CapRegion region, int order) {
  ScaledMoments out;
  const auto& rule = gauss_legendre(order);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (1.0 + rule.nodes[i]);
    const double ws = 0.5 * rule.weights[i];
    const double lo = region == CapRegion::Slab ? s * s : 2.0 * s - 1.0;
    const double hi = region == CapRegion::Slab ? 1.0 : s * s;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double base = ws * std::pow(s, m - 1) * half;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double z = mid + half * rule.nodes[j];
      const double w = base * rule.weights[j];
      out.one += w;
      out.s2 += w * s * s;
      out.z2 += w * z * z;
      out.z1 += w * z;
    }
  }
  return out;
}

ScaledMoments converged_scaled_moments(int m, CapRegion region) {
  const ScaledMoments lo = scaled_moments(m, region, 16);
  const ScaledMoments hi = scaled_moments(m, region, 32);
  const double diff = std::abs(lo.one - hi.one) + std::abs(lo.s2 - hi.s2) + std::abs(lo.z2 - hi.z2) +
                      std::abs(lo.z1 - hi.z1);
  const double size = std::abs(hi.one) + std::abs(hi.s2) + std::abs(hi.z2) + std::abs(hi.z1);
  require(diff <= kPlanarTol * size, ErrorCode::QuadratureFailure, "cap oracle: (s, z) rule did not converge");
  return hi;
}

// Angular integrals of rho^m and w rho^{m+2}, rho^2 = a / c(theta),
// w = sum theta_j^2 lambda_j^{-2}.
struct Angular {
  double j0 = 0.0;
  double j1 = 0.0;

  Angular& add(const Angular& o, double w) {
    j0 += w * o.j0;
    j1 += w * o.j1;
    return *this;
  }
};

// Hyperspherical Gauss-Legendre over S^{m-1} with `order` nodes per angle.
// Sums are formed level by level so that rounding stays at the size of one
// level's node count.
template <class F>
Angular sphere_sum(int m, int order, F&& f) {
  Vec theta = Vec::Zero(m);
  if (m == 1) {
    Angular out;
    theta[0] = 1.0;
    out.add(f(theta), 1.0);
    theta[0] = -1.0;
    out.add(f(theta), 1.0);
    return out;
  }
  const auto& rule = gauss_legendre(order);
  const std::size_t q = rule.nodes.size();
  std::vector<double> half_cos(q), half_sin(q), full_cos(q), full_sin(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double half = 0.5 * std::numbers::pi * (1.0 + rule.nodes[i]);
    const double full = std::numbers::pi * (1.0 + rule.nodes[i]);
    half_cos[i] = std::cos(half);
    half_sin[i] = std::sin(half);
    full_cos[i] = std::cos(full);
    full_sin[i] = std::sin(full);
  }
  std::function<Angular(int, double)> walk = [&](int k, double sinprod) {
    Angular out;
    if (k == m - 2) {
      for (std::size_t i = 0; i < q; ++i) {
        theta[k] = sinprod * full_cos[i];
        theta[k + 1] = sinprod * full_sin[i];
        out.add(f(theta), std::numbers::pi * rule.weights[i]);
      }
      return out;
    }
    for (std::size_t i = 0; i < q; ++i) {
      const double sp = half_sin[i];
      theta[k] = sinprod * half_cos[i];
      out.add(walk(k + 1, sinprod * sp), 0.5 * std::numbers::pi * rule.weights[i] * std::pow(sp, m - 2 - k));
    }
    return out;
  };
  return walk(0, 1.0);
}

Angular angular_integrals(const CapSpec& spec, const BoundaryProfile& profile, int order) {
  const int m = spec.n - 1;
  const Vec inv2 = spec.lambda.head(m).array().pow(-2.0).matrix();
  return sphere_sum(m, order, [&](const Vec& theta) {
    const double rho2 = spec.a / profile.coefficient(theta);
    double rhom = m % 2 ? std::sqrt(rho2) : 1.0;
    for (int i = 0; i < m / 2; ++i) rhom *= rho2;
    return Angular{rhom, theta.cwiseAbs2().dot(inv2) * rhom * rho2};
  });
}

Angular converged_angular(const CapSpec& spec, const BoundaryProfile& profile) {
  const int m = spec.n - 1;
  if (m == 1) return angular_integrals(spec, profile, 1);
  int order = 8;
  Angular prev = angular_integrals(spec, profile, order);
  for (;;) {
    const int next = 2 * order;
    require(std::pow(static_cast<double>(next), m - 1) <= static_cast<double>(kMaxDirections),
            ErrorCode::QuadratureFailure, "cap oracle: angular rule did not converge");
    const Angular cur = angular_integrals(spec, profile, next);
    if (std::abs(cur.j0 - prev.j0) <= kOracleTol * cur.j0 && std::abs(cur.j1 - prev.j1) <= kOracleTol * cur.j1)
      return cur;
    prev = cur;
    order = next;
  }
}

void check_spec(const CapSpec& spec) {
  spec.validate();
  require(spec.n >= 2 && spec.n <= kMaxDim, ErrorCode::InvalidArgument, "cap: dimension out of range");
}

}  // namespace

double CapFormulaResult::lower() const {
  const double d = std::abs(leading) * correction_bound;
  return std::isfinite(d) ? leading - d : -std::numeric_limits<double>::infinity();
}

double CapFormulaResult::upper() const {
  const double d = std::abs(leading) * correction_bound;
  return std::isfinite(d) ? leading + d : std::numeric_limits<double>::infinity();
}

double alpha_coefficient(const CapSpec& spec) {
  check_spec(spec);
  return alpha_with(spec, 2.0);
}

double slab_volume_closed(const CapSpec& spec) {
  check_spec(spec);
  return slab_volume_at(spec, spec.R);
}

double cone_volume_closed(const CapSpec& spec) {
  check_spec(spec);
  return slab_volume_at(spec, spec.R) / spec.n;
}

CapFormulaResult psi_closed(const CapSpec& spec) {
  check_spec(spec);
  return from_terms(spec, psi_terms(spec, spec.R));
}

CapFormulaResult phi_closed(const CapSpec& spec) {
  check_spec(spec);
  return from_terms(spec, phi_terms(spec, spec.R));
}

double BoundaryProfile::coefficient(const Vec& theta) const {
  if (quadratic.rows() == 1 && theta[0] < 0) return left;
  double c = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) c += theta[j] * quadratic.col(j).dot(theta);
  return c;
}

BoundaryProfile BoundaryProfile::with_radius(int n, double radius) {
  require(n >= 2 && radius > 0, ErrorCode::InvalidArgument, "BoundaryProfile: need n >= 2 and radius > 0");
  BoundaryProfile p;
  p.quadratic = Mat::Identity(n - 1, n - 1) / (2.0 * radius);
  p.left = 1.0 / (2.0 * radius);
  return p;
}

BoundaryProfile BoundaryProfile::random_admissible(const CapSpec& spec, Rng& rng) {
  check_spec(spec);
  const int m = spec.n - 1;
  // 1 + delta must lie in [R / (R + eps), 1 + eps / R]: inside the sandwich and
  // within the relative deviation.
  const double lo = spec.R / (spec.R + spec.epsilon) / (2.0 * spec.R);
  const double hi = (1.0 + spec.epsilon / spec.R) / (2.0 * spec.R);
  BoundaryProfile p;
  Vec eig(m);
  for (int i = 0; i < m; ++i) eig[i] = rng.uniform(lo, hi);
  Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(m, m, [&]() { return rng.normal(); }));
  const Mat q = qr.householderQ();
  p.quadratic = q * eig.asDiagonal() * q.transpose();
  p.left = rng.uniform(lo, hi);
  return p;
}

double region_integral_oracle(const CapSpec& spec, CapRegion region, CapIntegrand integrand,
                              const BoundaryProfile& profile) {
  check_spec(spec);
  const int m = spec.n - 1;
  require(profile.quadratic.rows() == m && profile.quadratic.cols() == m, ErrorCode::InvalidArgument,
          "region_integral_oracle: profile has the wrong dimension");
  const ScaledMoments sm = converged_scaled_moments(m, region);
  const Angular ang = converged_angular(spec, profile);
  if (integrand == CapIntegrand::One) return spec.a * sm.one * ang.j0;

  const double ln2 = std::pow(spec.lambda[m], -2.0);
  const double radial = spec.a * sm.s2 * ang.j1;
  const double height = spec.a * ln2 * (spec.a * spec.a * sm.z2) * ang.j0;
  const double centroid = -spec.a * ln2 * (2.0 * spec.a * spec.b * sm.z1) * ang.j0;
  const double total = radial + height + centroid;
  require(std::isfinite(total), ErrorCode::QuadratureFailure, "region_integral_oracle: non-finite result");
  return total;
}

double region_integral_oracle(const CapSpec& spec, CapRegion region, CapIntegrand integrand) {
  return region_integral_oracle(spec, region, integrand, BoundaryProfile::with_radius(spec.n, spec.R));
}

bool Interval::contains(double x, double rel_slack) const {
  const double pad = rel_slack * std::max(std::abs(lower), std::abs(upper));
  return x >= lower - pad && x <= upper + pad;
}

SandwichBounds sandwich_bounds(const CapSpec& spec) {
  check_spec(spec);
  const double rm = spec.R - spec.epsilon;
  const double rp = spec.R + spec.epsilon;
  auto envelope = [](std::initializer_list<std::pair<double, double>> terms) {
    Interval out;
    for (const auto& [x, y] : terms) {
      out.lower += std::min(x, y);
      out.upper += std::max(x, y);
    }
    return out;
  };
  SandwichBounds b;
  const double dm = slab_volume_at(spec, rm);
  const double dp = slab_volume_at(spec, rp);
  b.slab_volume = envelope({{dm, dp}});
  b.cone_volume = envelope({{dm / spec.n, dp / spec.n}});
  const Terms pm = psi_terms(spec, rm);
  const Terms pp = psi_terms(spec, rp);
  b.psi = envelope({{pm.alpha, pp.alpha}, {pm.a, pp.a}, {pm.b, pp.b}});
  const Terms fm = phi_terms(spec, rm);
  const Terms fp = phi_terms(spec, rp);
  b.phi = envelope({{fm.alpha, fp.alpha}, {fm.a, fp.a}, {fm.b, fp.b}});
  return b;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  require(den != 0, ErrorCode::InvalidArgument, "Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

ContradictionResult contradiction_coefficients(int n) {
  require(n >= 2 && n <= 1000000, ErrorCode::InvalidArgument, "contradiction_coefficients: need 2 <= n <= 1e6");
  const std::int64_t k = n;
  ContradictionResult r;
  r.c_out = make_rational((k + 2) * (k - 3), k * (k - 1));
  r.c_in = make_rational(k + 1, k - 1);
  r.verdict = r.c_out < r.c_in;
  return r;
}

std::vector<double> default_cap_schedule() {
  std::vector<double> s;
  for (int k = 8; k <= 16; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

std::vector<CapsRow> caps_verification(const std::vector<CapSpec>& specs, const std::vector<double>& schedule) {
  require(schedule.size() >= 2, ErrorCode::InsufficientSchedule, "caps_verification: need at least two values of a");
  std::vector<CapsRow> rows;
  for (const CapSpec& base : specs) {
    const bool unit = (base.lambda.array() == 1.0).all();
    std::vector<std::string> names = {"slab_volume", "cone_volume", "psi", "phi", "psi_leading", "phi_leading"};
    if (!unit) {
      names.push_back("psi_exponent_1");
      names.push_back("phi_exponent_1");
    }
    const std::size_t first = rows.size();
    for (double a : schedule) {
      CapSpec s = base;
      s.a = a;
      check_spec(s);
      const BoundaryProfile prof = BoundaryProfile::with_radius(s.n, s.R);
      const double slab = region_integral_oracle(s, CapRegion::Slab, CapIntegrand::One, prof);
      const double cone = region_integral_oracle(s, CapRegion::Cone, CapIntegrand::One, prof);
      const double psi = region_integral_oracle(s, CapRegion::Slab, CapIntegrand::Psi, prof);
      const double phi = region_integral_oracle(s, CapRegion::Cone, CapIntegrand::Psi, prof);
      const CapFormulaResult pc = psi_closed(s);
      const CapFormulaResult fc = phi_closed(s);
      std::vector<std::pair<double, double>> pairs = {{slab_volume_closed(s), slab}, {cone_volume_closed(s), cone},
                                                      {pc.value, psi},           {fc.value, phi},
                                                      {pc.leading, psi},         {fc.leading, phi}};
      if (!unit) {
        pairs.emplace_back(psi_terms(s, s.R, 1.0).sum(), psi);
        pairs.emplace_back(phi_terms(s, s.R, 1.0).sum(), phi);
      }
      for (std::size_t q = 0; q < names.size(); ++q) {
        CapsRow row;
        row.n = s.n;
        row.R = s.R;
        row.a = a;
        row.b = s.b;
        row.quantity = names[q];
        row.closed = pairs[q].first;
        row.oracle = pairs[q].second;
        row.rel_err = row.oracle == 0.0 ? std::abs(row.closed) : std::abs(row.closed - row.oracle) / std::abs(row.oracle);
        rows.push_back(row);
      }
    }
    for (std::size_t q = 0; q < names.size(); ++q) {
      std::vector<double> xs;
      std::vector<double> ys;
      bool usable = true;
      double sign = 0.0;
      for (std::size_t i = first + q; i < rows.size(); i += names.size()) {
        const double v = rows[i].oracle;
        if (v == 0.0 || (sign != 0.0 && std::signbit(v) != std::signbit(sign))) usable = false;
        sign = v;
        xs.push_back(rows[i].a);
        ys.push_back(std::abs(v));
      }
      const double slope = usable ? fit_log_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i = first + q; i < rows.size(); i += names.size()) rows[i].order_fit = slope;
    }
  }
  return rows;
}

void write_caps_csv(std::ostream& out, const std::vector<CapsRow>& rows) {
  const auto old = out.precision(17);
  out << "n,R,a,b,quantity,closed,oracle,rel_err,order_fit\n";
  for (const CapsRow& r : rows)
    out << r.n << ',' << r.R << ',' << r.a << ',' << r.b << ',' << r.quantity << ',' << r.closed << ',' << r.oracle
        << ',' << r.rel_err << ',' << r.order_fit << '\n';
  out.precision(old);
}

}  // namespace isocon

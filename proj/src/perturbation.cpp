#include "isocon/perturbation.hpp"

#include "isocon/error.hpp"
#include "isocon/predicates.hpp"
#include "isocon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isocon {
namespace {

constexpr int kAxialNodes = 64;

// Integrals over a solid of revolution about an axis through the origin:
// cross-sections are (n-1)-discs of radius rho(x) at axial position x.
struct Axial {
  double vol = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double radial2 = 0.0;  // integral of |transverse part|^2

  Axial operator-(const Axial& o) const { return {vol - o.vol, x1 - o.x1, x2 - o.x2, radial2 - o.radial2}; }
};

void accumulate(Axial& a, int m, double x, double rho, double w) {
  const double area = unit_ball_volume(m) * std::pow(rho, m);
  a.vol += w * area;
  a.x1 += w * area * x;
  a.x2 += w * area * x * x;
  a.radial2 += w * area * rho * rho * m / (m + 2.0);
}

// Cone with base disc of radius rho0 at x0 and apex at x = apex.
Axial cone_axial(int m, double x0, double rho0, double apex) {
  Axial a;
  const auto& rule = gauss_legendre(kAxialNodes);
  const double half = 0.5 * (apex - x0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = x0 + half * (rule.nodes[i] + 1.0);
    accumulate(a, m, x, rho0 * (apex - x) / (apex - x0), half * rule.weights[i]);
  }
  return a;
}

// Cap {x >= r - height} of the ball of radius r, using x = r cos(phi).
Axial ball_cap_axial(int m, double r, double height) {
  Axial a;
  const double phi0 = 2.0 * std::asin(std::sqrt(height / (2.0 * r)));
  const auto& rule = gauss_legendre(kAxialNodes);
  const double half = 0.5 * phi0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phi = half * (rule.nodes[i] + 1.0);
    accumulate(a, m, r * std::cos(phi), r * std::sin(phi), half * rule.weights[i] * r * std::sin(phi));
  }
  return a;
}

MomentData axial_moments(const Vec& w, const Axial& a) {
  const int n = static_cast<int>(w.size());
  MomentData out;
  out.volume = a.vol;
  out.first = a.x1 * w;
  const Mat ww = w * w.transpose();
  out.second = a.x2 * ww + a.radial2 / (n - 1) * (Mat::Identity(n, n) - ww);
  return out;
}

// Balls and ellipsoids as affine images c + L y of the unit ball.
struct Round {
  Vec c;
  Mat l;
  Mat l_inv;
};

std::optional<Round> as_round(const ConvexBody& body) {
  if (const auto* b = std::get_if<Ball>(&body)) {
    const int n = b->dim();
    return Round{b->center(), Mat::Identity(n, n) * b->radius(), Mat::Identity(n, n) / b->radius()};
  }
  if (const auto* e = std::get_if<Ellipsoid>(&body)) return Round{e->center(), e->shape_sqrt(), e->shape_sqrt().inverse()};
  return std::nullopt;
}

MomentData reflect(const MomentData& m) {
  MomentData out = m;
  out.first = -m.first;
  return out;
}

void finish(PerturbationResult& r) {
  r.delta_volume = r.delta.volume;
  r.delta_second = r.delta.second.trace();
  r.region_centroid = r.delta.centroid();
}

void check_direction(const Vec& u, int n, const char* what) {
  require(u.size() == n, ErrorCode::InvalidArgument, std::string(what) + ": dimension mismatch");
  require(std::abs(u.norm() - 1.0) <= 1e-12, ErrorCode::InvalidArgument, std::string(what) + ": u must be a unit vector");
}

// Region conv(K, p) \ K as cones from p over the facets that see p.
MomentData spike_region(const VPolytope& k, const Vec& p) {
  MomentData total = MomentData::zero(k.dim());
  const Vec* buf[kMaxDim + 1];
  for (const auto& f : k.facets()) {
    const int n = k.dim();
    for (int i = 0; i < n; ++i) buf[i] = &k.vertices()[f.vertices[i]];
    buf[n] = &p;
    if (orientation(std::span<const Vec* const>(buf, n + 1)) <= 0) continue;
    Simplex s;
    for (int v : f.vertices) s.points.push_back(k.vertices()[v]);
    s.points.push_back(p);
    total += simplex_moments(s);
  }
  return total;
}

bool centrally_symmetric(const ConvexBody& body) {
  const double tol = 1e-9 * diameter(body);
  if (const auto* p = std::get_if<VPolytope>(&body)) {
    for (const auto& v : p->vertices()) {
      const bool paired = std::any_of(p->vertices().begin(), p->vertices().end(),
                                      [&](const Vec& w) { return (v + w).norm() <= tol; });
      if (!paired) return false;
    }
    return true;
  }
  if (const auto round = as_round(body)) return round->c.norm() <= tol;
  return false;
}

}  // namespace

MomentData PerturbationResult::perturbed_moments() const {
  return kind == PerturbationKind::Added ? original_moments + delta : original_moments - delta;
}

Vec boundary_exit(const ConvexBody& body, const Vec& from, const Vec& u) {
  require(contains(body, from, kBoundaryTolerance * diameter(body)), ErrorCode::InvalidArgument,
          "boundary_exit: start point must lie in the body");
  const Vec far = from + 2.0 * (diameter(body) + 1.0) * u;
  const auto t = ray_entry(body, far, -u);
  require(t.has_value(), ErrorCode::InvalidArgument, "boundary_exit: ray misses the body");
  return far - *t * u;
}

PerturbationResult add_spike(const ConvexBody& body, const Vec& x0, const Vec& u, double t) {
  const int n = dim(body);
  check_direction(u, n, "add_spike");
  require(x0.size() == n, ErrorCode::InvalidArgument, "add_spike: dimension mismatch");
  require(t > 0.0, ErrorCode::InvalidArgument, "add_spike: t must be positive");
  const double tol = kBoundaryTolerance * diameter(body);
  require(std::abs(boundary_gap(body, x0)) <= tol, ErrorCode::NotOnBoundary, "add_spike: X0 is not on the boundary");

  PerturbationResult r{body, body_moments(body), std::nullopt, MomentData::zero(n)};
  r.kind = PerturbationKind::Added;
  r.base_point = x0;
  r.direction = u;
  r.amount = t;
  const Vec p = x0 + t * u;

  if (const auto* k = std::get_if<VPolytope>(&body)) {
    bool outward = false;
    for (const auto& f : k->faces())
      if (std::abs(f.normal.dot(x0) - f.offset) <= tol && f.normal.dot(u) > 0) outward = true;
    require(outward, ErrorCode::InvalidArgument, "add_spike: u does not point outward at X0");
    r.delta = spike_region(*k, p);
    require(r.delta.volume > 0.0, ErrorCode::PointInside, "add_spike: X0 + t u lies in K");
    PointList pts = k->vertices();
    pts.push_back(p);
    r.perturbed = convex_hull(pts);
  } else if (const auto round = as_round(body)) {
    const Vec y0 = round->l_inv * (x0 - round->c);
    const Vec yp = round->l_inv * (p - round->c);
    require(y0.dot(round->l_inv * u) > 0, ErrorCode::InvalidArgument, "add_spike: u does not point outward at X0");
    const double d = yp.norm();
    require(d > 1.0, ErrorCode::PointInside, "add_spike: X0 + t u lies in K");
    // Tangent cone from yp touches the unit sphere on the plane x = 1/d.
    const double height = (d - 1.0) / d;
    const double base = 1.0 / d;
    const double rho0 = std::sqrt((1.0 - base) * (1.0 + base));
    const Axial region = cone_axial(n - 1, base, rho0, d) - ball_cap_axial(n - 1, 1.0, height);
    r.delta = axial_moments(yp / d, region).transformed(round->l, round->c);
  } else {
    throw Error(ErrorCode::Unsupported, "add_spike: unsupported body type");
  }
  finish(r);
  return r;
}

PerturbationResult cut_slab(const ConvexBody& body, const Vec& u, double depth) {
  const int n = dim(body);
  check_direction(u, n, "cut_slab");
  const double top = support(body, u).value;
  const double bottom = -support(body, -u).value;
  require(depth > 0.0 && depth < top - bottom, ErrorCode::EmptyIntersection,
          "cut_slab: depth must lie strictly between 0 and the width");

  PerturbationResult r{body, body_moments(body), std::nullopt, MomentData::zero(n)};
  r.kind = PerturbationKind::Removed;
  r.direction = u;
  r.amount = depth;
  const Halfspace keep(u, top - depth);

  if (const auto* k = std::get_if<VPolytope>(&body)) {
    r.perturbed = clip_halfspace(*k, keep);
    r.delta = body_moments(clip_halfspace(*k, keep.complement()));
  } else if (const auto round = as_round(body)) {
    const Vec lu = round->l.transpose() * u;
    const double scale = lu.norm();
    r.delta = axial_moments(lu / scale, ball_cap_axial(n - 1, 1.0, depth / scale)).transformed(round->l, round->c);
  } else {
    throw Error(ErrorCode::Unsupported, "cut_slab: unsupported body type");
  }
  finish(r);
  return r;
}

PerturbationResult symmetrize(const PerturbationResult& r) {
  require(!r.symmetric, ErrorCode::InvalidArgument, "symmetrize: already symmetric");
  require(centrally_symmetric(r.original), ErrorCode::NotSymmetric, "symmetrize: body is not symmetric about 0");
  PerturbationResult s = r;
  s.symmetric = true;
  s.delta = r.delta + reflect(r.delta);

  const auto* k = std::get_if<VPolytope>(&r.original);
  if (r.kind == PerturbationKind::Added) {
    // The regions sit beyond the facets seen from p and from -p; they are
    // disjoint exactly when the hull volume is additive.
    if (k) {
      const Vec p = r.base_point + r.amount * r.direction;
      PointList pts = k->vertices();
      pts.push_back(p);
      pts.push_back(-p);
      VPolytope both = convex_hull(pts);
      const double expected = r.original_moments.volume + s.delta.volume;
      require(std::abs(body_moments(both).volume - expected) <= 1e-10 * expected, ErrorCode::InvalidArgument,
              "symmetrize: the two spike regions overlap");
      s.perturbed = std::move(both);
    }
  } else {
    const double top = support(r.original, r.direction).value;
    require(r.amount < top, ErrorCode::InvalidArgument, "symmetrize: the two slabs overlap");
    if (k) s.perturbed = clip_halfspace(std::get<VPolytope>(*r.perturbed), Halfspace(-r.direction, top - r.amount));
  }
  finish(s);
  return s;
}

double exact_ratio(const PerturbationResult& r) {
  const int n = r.original_moments.dim();
  const double before = isotropy_constant(r.original_moments);
  const double after = isotropy_constant(r.perturbed_moments());
  return std::exp(2.0 * n * (std::log(after) - std::log(before)));
}

double prop4_prediction(const IsotropicFrame& frame, const PerturbationResult& r, PerturbationKind sign) {
  require(check_isotropic(r.original_moments, kIsotropyTolerance).passed, ErrorCode::NotIsotropic,
          "prop4_prediction: original body is not isotropic");
  const int n = r.original_moments.dim();
  const double first_order =
      r.delta_second / (frame.M_K * frame.M_K) - (n + 2.0) * r.delta_volume / r.original_moments.volume;
  return sign == PerturbationKind::Added ? 1.0 + first_order : 1.0 - first_order;
}

double prop4_prediction(const IsotropicFrame& frame, const PerturbationResult& r) {
  return prop4_prediction(frame, r, r.kind);
}

ExpansionResiduals expansion_residuals(const IsotropicFrame& frame, const PerturbationResult& r) {
  require(check_isotropic(r.original_moments, kIsotropyTolerance).passed, ErrorCode::NotIsotropic,
          "expansion_residuals: original body is not isotropic");
  const int n = r.original_moments.dim();
  const MomentData m = r.perturbed_moments();
  const double m2 = frame.M_K * frame.M_K;
  const double sign = r.kind == PerturbationKind::Added ? 1.0 : -1.0;
  const double det_raw = m.second.determinant();
  ExpansionResiduals out;
  out.lemma1 = std::abs(det_raw - std::pow(m2, n) - sign * std::pow(m2, n - 1) * r.delta_second);
  out.lemma3 = std::abs(m.centered_second().determinant() - det_raw);
  return out;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "fit_log_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = k * sxx - sx * sx;
  require(denom > 0.0, ErrorCode::InsufficientSchedule, "fit_log_slope: abscissae do not vary");
  return (k * sxy - sx * sy) / denom;
}

namespace {

// Slope over the rows with a positive residual; infinite when the residual
// vanishes at (almost) every scale.
double residual_slope(const std::vector<ScheduleRow>& rows, double ScheduleRow::*field) {
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (row.*field > 0.0) {
      x.push_back(row.delta_volume);
      y.push_back(row.*field);
    }
  }
  if (x.size() < 3) return std::numeric_limits<double>::infinity();
  return fit_log_slope(x, y);
}

}  // namespace

ErrorOrderFit prop4_error_order(const ConvexBody& body, const Vec& u, const std::vector<double>& schedule,
                                ScheduleVariant variant) {
  require(schedule.size() >= 6, ErrorCode::InsufficientSchedule, "prop4_error_order: need at least 6 scales");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    require(schedule[i] > 0.0, ErrorCode::InsufficientSchedule, "prop4_error_order: scales must be positive");
    if (i > 0)
      require(schedule[i] < schedule[i - 1], ErrorCode::InsufficientSchedule,
              "prop4_error_order: scales must be strictly decreasing");
  }
  const int n = dim(body);
  check_direction(u, n, "prop4_error_order");
  const IsotropicFrame frame = isotropic_frame(body);
  const ConvexBody iso = isotropic_image(body, frame);
  Vec v = frame.A.transpose().fullPivLu().solve(u);
  v.normalize();
  const Vec x0 = variant == ScheduleVariant::Spike ? boundary_exit(iso, Vec::Zero(n), v) : Vec();

  ErrorOrderFit fit;
  for (double scale : schedule) {
    const PerturbationResult r = variant == ScheduleVariant::Slab ? cut_slab(iso, v, scale) : add_spike(iso, x0, v, scale);
    ScheduleRow row;
    row.scale = scale;
    row.delta_volume = r.delta_volume;
    row.delta_second = r.delta_second;
    row.exact_ratio = exact_ratio(r);
    row.predicted_ratio = prop4_prediction(frame, r);
    row.residual = std::abs(row.exact_ratio - row.predicted_ratio);
    const ExpansionResiduals e = expansion_residuals(frame, r);
    row.lemma1_resid = e.lemma1;
    row.lemma3_resid = e.lemma3;
    fit.rows.push_back(row);
  }
  fit.slope = residual_slope(fit.rows, &ScheduleRow::residual);
  fit.lemma1_slope = residual_slope(fit.rows, &ScheduleRow::lemma1_resid);
  fit.lemma3_slope = residual_slope(fit.rows, &ScheduleRow::lemma3_resid);
  return fit;
}

void write_schedule_csv(std::ostream& out, const std::vector<ScheduleRow>& rows) {
  out << "scale,delta_volume,delta_second,exact_ratio,predicted_ratio,residual\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.scale << ',' << r.delta_volume << ',' << r.delta_second << ',' << r.exact_ratio << ','
        << r.predicted_ratio << ',' << r.residual << '\n';
}

double sphere_condition_residual(const ConvexBody& body, const Vec& x0) {
  const MomentData m = body_moments(body);
  require(check_isotropic(m, kIsotropyTolerance).passed, ErrorCode::NotIsotropic,
          "sphere_condition_residual: body is not isotropic");
  require(on_boundary(body, x0, kBoundaryTolerance), ErrorCode::NotOnBoundary,
          "sphere_condition_residual: X0 is not on the boundary");
  const int n = m.dim();
  const double m2 = m.second.trace() / n;
  return x0.squaredNorm() * m.volume - (n + 2.0) * m2;
}

double cap_max_norm(const ConvexBody& body, const Vec& u, double alpha) {
  const int n = dim(body);
  check_direction(u, n, "cap_max_norm");
  if (const auto* k = std::get_if<VPolytope>(&body)) {
    const VPolytope cap = clip_halfspace(*k, Halfspace(-u, -alpha));
    double best = 0.0;
    for (const auto& v : cap.vertices()) best = std::max(best, v.norm());
    return best;
  }
  if (const auto* b = std::get_if<Ball>(&body)) {
    // Extreme points of the cap are sphere points c + r y with <y, u> >= beta,
    // and |c + r y|^2 = |c|^2 + r^2 + 2 r <c, y>.
    const Vec& c = b->center();
    const double r = b->radius();
    const double beta = (alpha - c.dot(u)) / r;
    require(beta < 1.0, ErrorCode::EmptyIntersection, "cap_max_norm: cap has empty interior");
    Vec y;
    const double cn = c.norm();
    const Vec chat = cn > 0.0 ? Vec(c / cn) : Vec(u);
    if (chat.dot(u) >= beta) {
      y = chat;
    } else {
      Vec w = c - c.dot(u) * u;
      if (w.norm() <= 1e-300) {
        // c is antiparallel to u: every point of the rim is equally far.
        w = Vec::Zero(n);
        w((std::abs(u(0)) < 0.9) ? 0 : 1) = 1.0;
        w -= w.dot(u) * u;
      }
      w.normalize();
      y = beta * u + std::sqrt(std::max(0.0, 1.0 - beta * beta)) * w;
    }
    return (c + r * y).norm();
  }
  throw Error(ErrorCode::Unsupported, "cap_max_norm: only polytopes and balls are supported");
}

}  // namespace isocon

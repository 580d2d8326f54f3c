#include "isocon/verify.hpp"

#include "isocon/error.hpp"
#include "isocon/isotropy.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace isocon {
namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

std::vector<double> dyadic(int from, int to) {
  std::vector<double> s;
  for (int k = from; k <= to; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

// Numeric cells become JSON numbers (null for nan and inf), "true" and
// "false" become booleans, anything else stays a string.
Json cell_to_json(const std::string& cell) {
  if (cell == "true" || cell == "false") return cell == "true";
  if (cell == "nan" || cell == "inf" || cell == "-inf") return nullptr;
  double x = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (res.ec == std::errc() && res.ptr == cell.data() + cell.size()) return x;
  return cell;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void Table::write_csv(std::ostream& out) const {
  out << join(header) << '\n';
  for (const auto& r : rows) out << join(r) << '\n';
}

Json Table::to_json() const {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) obj[header[i]] = cell_to_json(r[i]);
    out.push_back(obj);
  }
  return out;
}

void SuiteResult::fail(std::size_t row) {
  if (passed) first_failure = join(table.rows.at(row));
  passed = false;
}

SuiteResult verify_contradiction(int n_max) {
  require(n_max >= 2, ErrorCode::InvalidArgument, "verify contradiction: need n_max >= 2");
  SuiteResult res;
  res.table.header = {"n", "c_out", "c_in", "c_out_value", "c_in_value", "verdict"};
  for (int n = 2; n <= n_max; ++n) {
    const ContradictionResult c = contradiction_coefficients(n);
    res.table.rows.push_back({std::to_string(n), c.c_out.str(), c.c_in.str(), format_number(c.c_out.value()),
                              format_number(c.c_in.value()), c.verdict ? "true" : "false"});
    if (!c.verdict) res.fail(res.table.rows.size() - 1);
  }
  return res;
}

SuiteResult verify_caps(const CapsSuiteOptions& o) {
  std::vector<CapSpec> specs;
  if (!o.lambda.empty()) {
    const int n = static_cast<int>(o.lambda.size());
    CapSpec s = CapSpec::unit_scaling(n, o.R, o.schedule.front(), o.b);
    s.lambda = Eigen::Map<const Vec>(o.lambda.data(), n);
    specs.push_back(s);
  } else {
    for (int n : o.dims) specs.push_back(CapSpec::unit_scaling(n, o.R, o.schedule.front(), o.b));
  }
  const std::vector<CapsRow> rows = caps_verification(specs, o.schedule);
  SuiteResult res;
  res.table.header = {"n", "R", "a", "b", "quantity", "closed", "oracle", "rel_err", "order_fit"};
  for (const CapsRow& r : rows) {
    res.table.rows.push_back({std::to_string(r.n), format_number(r.R), format_number(r.a), format_number(r.b), r.quantity,
                              format_number(r.closed), format_number(r.oracle), format_number(r.rel_err),
                              format_number(r.order_fit)});
    if (r.quantity.find("exponent") != std::string::npos) continue;
    const bool leading = r.quantity.find("leading") != std::string::npos;
    const bool volume = r.quantity.find("volume") != std::string::npos;
    bool ok = leading ? r.rel_err <= 5 * r.a / r.R : r.rel_err <= o.rel_tol;
    if (o.schedule.size() >= 2) {
      const double expect = volume ? (r.n + 1) / 2.0 : (r.n + 3) / 2.0;
      ok = ok && std::abs(r.order_fit - expect) <= o.slope_tol;
    }
    if (!ok) res.fail(res.table.rows.size() - 1);
  }
  return res;
}

SuiteResult verify_prop4(const ConvexBody& body, const Prop4SuiteOptions& o) {
  const int n = dim(body);
  const std::vector<double> schedule = o.schedule.empty() ? dyadic(4, 10) : o.schedule;
  const Vec u = o.direction.size() ? o.direction.normalized() : Vec(Vec::Unit(n, 0));
  const ErrorOrderFit fit = prop4_error_order(body, u, schedule, o.variant);
  SuiteResult res;
  res.table.header = {"scale",          "delta_volume", "delta_second", "exact_ratio", "predicted_ratio",
                      "residual",       "lemma1_resid", "lemma3_resid", "order_fit"};
  for (const ScheduleRow& r : fit.rows)
    res.table.rows.push_back({format_number(r.scale), format_number(r.delta_volume), format_number(r.delta_second),
                              format_number(r.exact_ratio), format_number(r.predicted_ratio), format_number(r.residual),
                              format_number(r.lemma1_resid), format_number(r.lemma3_resid), format_number(fit.slope)});
  if (!(std::abs(fit.slope - o.slope_target) <= o.slope_tol))
    for (std::size_t i = 0; i < res.table.rows.size() && res.passed; ++i) res.fail(i);
  return res;
}

SuiteResult verify_lemma5(const Lemma5SuiteOptions& o) {
  require(o.points >= 1, ErrorCode::InvalidArgument, "verify lemma5: need at least one point");
  const ConvexBody ball = Ball(Vec::Zero(o.n), 1.0);
  Rng rng(o.seed);
  SuiteResult res;
  res.table.header = {"check", "index", "scale", "region_diameter", "value", "target", "error"};
  for (int i = 0; i < o.points; ++i) {
    const Vec x0 = rng.unit_vector(o.n);
    const double r = sphere_condition_residual(ball, x0);
    res.table.rows.push_back({"sphere_residual", std::to_string(i), "0", "0", format_number(r), "0",
                              format_number(std::abs(r))});
    if (!(std::abs(r) <= o.residual_tol)) res.fail(res.table.rows.size() - 1);
  }
  std::vector<double> heights = o.spike_heights;
  if (heights.empty()) {
    for (double t = 1e-2; t > 1.25e-7; t /= 4) heights.push_back(t);
    heights.push_back(1.25e-7);  // region diameter 1e-3
  }
  const Vec x0 = rng.unit_vector(o.n);
  double last_err = 0.0;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double t = heights[i];
    const PerturbationResult p = add_spike(ball, x0, x0, t);
    const double ratio = p.delta_second / p.delta_volume;
    const double d = 1 + t;
    const double diam = 2 * std::sqrt(1 - 1 / (d * d));
    const double err = std::abs(ratio - x0.squaredNorm());
    last_err = err;
    res.table.rows.push_back({"spike_ratio", std::to_string(i), format_number(t), format_number(diam),
                              format_number(ratio), format_number(x0.squaredNorm()), format_number(err)});
  }
  if (!(last_err < o.ratio_tol)) res.fail(res.table.rows.size() - 1);
  return res;
}

}  // namespace isocon

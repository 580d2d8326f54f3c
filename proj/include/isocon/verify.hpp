#pragma once

#include "isocon/body.hpp"
#include "isocon/caps.hpp"
#include "isocon/io.hpp"
#include "isocon/perturbation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace isocon {

/// Rows of already formatted cells under a fixed header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
  Json to_json() const;  // array of objects keyed by the header
};

/// Shortest round-trip formatting; "nan" and "inf" spelled out.
std::string format_number(double x);

struct SuiteResult {
  Table table;
  bool passed = true;
  std::string first_failure;  // CSV text of the first failing row

  void fail(std::size_t row);
};

/// n = 2..n_max: c_out, c_in as exact fractions, verdict c_out < c_in.
SuiteResult verify_contradiction(int n_max);

struct CapsSuiteOptions {
  std::vector<int> dims{2, 3, 4};
  double R = 1.0;
  double b = 0.0;
  std::vector<double> lambda;  // empty: all ones; otherwise fixes n
  std::vector<double> schedule = default_cap_schedule();
  double rel_tol = 1e-8;       // exact closed forms against the oracle
  double slope_tol = 0.05;
};

/// Exact rows must match within rel_tol, leading rows within 5 a / R, and the
/// order fits within slope_tol of (n+1)/2 (volumes) or (n+3)/2 (psi, phi).
/// Rows for the lambda^{-1} reading are reported without a contract.
SuiteResult verify_caps(const CapsSuiteOptions& options);

struct Prop4SuiteOptions {
  std::vector<double> schedule;  // empty: 2^-4 .. 2^-10
  ScheduleVariant variant = ScheduleVariant::Slab;
  Vec direction;                 // empty: e_1
  double slope_target = 2.0;
  double slope_tol = 0.3;
};

SuiteResult verify_prop4(const ConvexBody& body, const Prop4SuiteOptions& options);

struct Lemma5SuiteOptions {
  int n = 2;
  int points = 100;
  std::uint64_t seed = 1;
  double residual_tol = 1e-12;
  double ratio_tol = 1e-3;
  std::vector<double> spike_heights;  // empty: 1e-2 down to 1.25e-7
};

/// On the unit ball: the balance residual at random boundary points, and
/// delta_second / delta_volume of a shrinking spike against |X0|^2.
SuiteResult verify_lemma5(const Lemma5SuiteOptions& options);

}  // namespace isocon

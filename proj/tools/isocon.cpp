// Command-line front end: isotropy reports, verification suites, searches and
// curvature probes. Exit codes: 0 success, 2 input error, 3 degenerate
// geometry, 4 verification contract failure.

#include "isocon/curvature.hpp"
#include "isocon/error.hpp"
#include "isocon/io.hpp"
#include "isocon/isotropy.hpp"
#include "isocon/search.hpp"
#include "isocon/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

using namespace isocon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitContract = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput:
    case ErrorCode::DegenerateBody:
    case ErrorCode::EmptyIntersection:
    case ErrorCode::LowAcceptance:
    case ErrorCode::NotIsotropic:
    case ErrorCode::FlatPoint:
    case ErrorCode::NonUniqueNormal:
    case ErrorCode::QuadratureFailure:
      return kExitDegenerate;
    default:
      return kExitInput;
  }
}

struct Options {
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;

  std::string body;
  std::vector<int> dims;
  int n_max = 64;
  double R = 1.0;
  double b = 0.0;
  std::vector<double> lambda;
  std::vector<double> schedule;
  std::string suite;
  std::string variant = "slab";
  std::vector<double> direction;
  int points = 100;
  std::string config;
  std::string trace;
  std::vector<double> point;
  double radius = 0.05;
};

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

// A readable body file, or one of the built-in names disc, square, triangle,
// ball, cube, simplex (the last three in dimension --n, default 2).
ConvexBody resolve_body(const std::string& name, int n) {
  if (std::filesystem::exists(name)) return read_body(name);
  auto box = [](int d) {
    PointList pts;
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vec p(d);
      for (int i = 0; i < d; ++i) p[i] = (mask >> i & 1) ? 0.5 : -0.5;
      pts.push_back(p);
    }
    return convex_hull(pts);
  };
  auto simplex = [](int d) {
    PointList pts{Vec::Zero(d)};
    for (int i = 0; i < d; ++i) pts.push_back(Vec::Unit(d, i));
    return convex_hull(pts);
  };
  if (name == "disc") return Ball(Vec::Zero(2), 1.0);
  if (name == "ball") return Ball(Vec::Zero(n), 1.0);
  if (name == "square") return box(2);
  if (name == "cube") return box(n);
  if (name == "triangle") return simplex(2);
  if (name == "simplex") return simplex(n);
  throw Error(ErrorCode::InvalidArgument, "no such body file or built-in body: " + name);
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::absolute(path).parent_path();
  require(std::filesystem::is_directory(parent), ErrorCode::InvalidArgument,
          "output directory does not exist: " + parent.string());
}

// Writes to --out when given, otherwise to standard output.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot write " + path);
  write(out);
}

void emit_json(const std::string& path, const Json& j) {
  emit(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int run_isotropy(const Options& o) {
  const ConvexBody body = resolve_body(o.body, o.dims.empty() ? 2 : o.dims.front());
  const IsotropicFrame frame = isotropic_frame(body);
  const IsotropyReport report = check_isotropic(body, o.tol.value_or(1e-9));
  const IsotropyReport image = check_isotropic(isotropic_image(body, frame), o.tol.value_or(1e-9));
  if (o.format == "csv") {
    emit(o.out, [&](std::ostream& os) {
      os.precision(17);
      os << "field,value\n"
         << "M_K," << report.M_K << "\nL_K," << report.L_K << "\nfirst_moment_resid," << report.first_moment_resid
         << "\nisotropy_resid," << report.isotropy_resid << "\nimage_first_moment_resid," << image.first_moment_resid
         << "\nimage_isotropy_resid," << image.isotropy_resid << '\n';
    });
  } else {
    emit_json(o.out, Json{{"report", report_to_json(report)},
                          {"frame", frame_to_json(frame)},
                          {"isotropic_image_report", report_to_json(image)}});
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  SuiteResult res;
  if (o.suite == "contradiction") {
    res = verify_contradiction(o.n_max);
  } else if (o.suite == "caps") {
    CapsSuiteOptions c;
    if (!o.dims.empty()) c.dims = o.dims;
    c.R = o.R;
    c.b = o.b;
    c.lambda = o.lambda;
    if (!o.schedule.empty()) c.schedule = o.schedule;
    if (o.tol) c.rel_tol = *o.tol;
    res = verify_caps(c);
  } else if (o.suite == "prop4") {
    require(!o.body.empty(), ErrorCode::InvalidArgument, "verify prop4 needs --body");
    Prop4SuiteOptions p;
    p.schedule = o.schedule;
    require(o.variant == "slab" || o.variant == "spike", ErrorCode::InvalidArgument, "--variant must be slab or spike");
    p.variant = o.variant == "slab" ? ScheduleVariant::Slab : ScheduleVariant::Spike;
    if (!o.direction.empty()) p.direction = to_vec(o.direction);
    if (o.tol) p.slope_tol = *o.tol;
    res = verify_prop4(resolve_body(o.body, o.dims.empty() ? 2 : o.dims.front()), p);
  } else {
    Lemma5SuiteOptions l;
    l.n = o.dims.empty() ? 2 : o.dims.front();
    l.points = o.points;
    l.seed = o.seed;
    if (o.tol) l.residual_tol = *o.tol;
    res = verify_lemma5(l);
  }
  emit(o.out, [&](std::ostream& os) {
    if (o.format == "json")
      os << res.table.to_json().dump(2) << '\n';
    else
      res.table.write_csv(os);
  });
  if (!res.passed) {
    std::cerr << "contract failure: " << res.first_failure << '\n';
    return kExitContract;
  }
  return kExitOk;
}

int run_search(const Options& o) {
  SearchConfig config = config_from_json(read_json(o.config));
  const RunLog log = hill_climb(config);
  save_run(log, o.out);
  if (!o.trace.empty()) emit(o.trace, [&](std::ostream& os) { write_trace_csv(os, log); });
  int accepted = 0;
  for (const auto& r : log.records) accepted += r.accepted;
  const double final_L = log.records.empty() ? evaluate_candidate(log.final_body).L_K : log.records.back().L_K;
  std::cout.precision(8);
  std::cout << "search: mode=" << (config.mode == SearchMode::Maximize ? "maximize" : "minimize") << " n=" << config.n
            << " vertices=" << log.final_body.vertices().size() << " iterations=" << log.records.size()
            << " accepted=" << accepted << " final_L_K=" << final_L << '\n';
  return kExitOk;
}

int run_probe(const Options& o) {
  const ConvexBody body = resolve_body(o.body, o.dims.empty() ? 2 : o.dims.front());
  const Vec x0 = to_vec(o.point);
  const CurvatureEstimate e = probe_curvature(body, x0, o.radius);
  Json j = probe_to_json(e);
  j["strictly_convex"] = strict_convexity_test(body, x0);
  if (o.format == "csv") {
    emit(o.out, [&](std::ostream& os) {
      os << "field,value\n"
         << "verdict," << to_string(e.verdict) << "\neps_hat," << format_number(e.eps_hat) << "\nradius,"
         << format_number(e.radius) << '\n';
    });
  } else {
    emit_json(o.out, j);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotropic constants of convex bodies: reports, verification suites, searches and probes"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Seed for every random choice")->default_val(1);
  app.add_option("--tol", o.tol, "Tolerance override for the selected command");
  auto* format = app.add_option("--format", o.format, "Output format (verify defaults to csv)");
  format->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "Output path (standard output when omitted)");
  app.add_option("--n", o.dims, "Dimension(s)")->delimiter(',');

  auto* iso = app.add_subcommand("isotropy", "Isotropic frame and L_K of a body");
  iso->add_option("--body", o.body, "Body JSON file or built-in name")->required();

  auto* ver = app.add_subcommand("verify", "Run a verification suite and write a CSV report");
  ver->add_option("suite,--suite", o.suite, "prop4, caps, lemma5 or contradiction")
      ->required()
      ->check(CLI::IsMember({"prop4", "caps", "lemma5", "contradiction"}));
  ver->add_option("--n-max", o.n_max, "Largest dimension for the contradiction suite");
  ver->add_option("--R", o.R, "Curvature radius for the caps suite");
  ver->add_option("--b", o.b, "Centroid height for the caps suite");
  ver->add_option("--lambda", o.lambda, "Diagonal scaling for the caps suite (fixes n)")->delimiter(',');
  ver->add_option("--a-schedule", o.schedule, "Comma-separated schedule (a for caps, scales for prop4)")->delimiter(',');
  ver->add_option("--body", o.body, "Body for the prop4 suite");
  ver->add_option("--variant", o.variant, "slab or spike for the prop4 suite");
  ver->add_option("--direction", o.direction, "Direction for the prop4 suite")->delimiter(',');
  ver->add_option("--points", o.points, "Boundary points for the lemma5 suite");
  ver->callback([&] {
    if (format->count() == 0) o.format = "csv";
  });

  auto* search = app.add_subcommand("search", "Hill-climb L_K over polytopes");
  search->add_option("--config", o.config, "SearchConfig JSON")->required()->check(CLI::ExistingFile);
  search->add_option("--trace", o.trace, "Optional CSV of the L_K trace");

  auto* probe = app.add_subcommand("probe", "Curvature probe at a boundary point");
  probe->add_option("--body", o.body, "Body JSON file or built-in name")->required();
  probe->add_option("--point", o.point, "Boundary point, comma separated")->required()->delimiter(',');
  probe->add_option("--radius", o.radius, "Largest tangential offset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    check_output_path(o.out);
    check_output_path(o.trace);
    if (*iso) return run_isotropy(o);
    if (*ver) return run_verify(o);
    if (*search) {
      require(!o.out.empty(), ErrorCode::InvalidArgument, "search needs --out for the run log");
      return run_search(o);
    }
    if (*probe) return run_probe(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

#include "isocon/search.hpp"

#include "isocon/error.hpp"
#include "isocon/moments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

namespace isocon {
namespace {

constexpr int kFormatVersion = 1;
constexpr int kRejectionStreak = 20;
constexpr double kImprovement = 1e-12;

const char* mode_name(SearchMode m) { return m == SearchMode::Maximize ? "maximize" : "minimize"; }

// Initial vertices: random points on the unit sphere, antipodal pairs when
// symmetric. Redrawn until every point is extreme.
PointList initial_points(const SearchConfig& c, Rng& rng) {
  for (;;) {
    PointList pts;
    const int free = c.symmetric ? c.vertex_count / 2 : c.vertex_count;
    for (int i = 0; i < free; ++i) pts.push_back(rng.unit_vector(c.n));
    if (c.symmetric)
      for (int i = 0; i < free; ++i) pts.push_back(-pts[i]);
    try {
      if (static_cast<int>(convex_hull(pts).vertices().size()) == c.vertex_count) return pts;
    } catch (const Error&) {
    }
  }
}

bool improves(SearchMode mode, double candidate, double current) {
  return mode == SearchMode::Maximize ? candidate > current * (1 + kImprovement)
                                      : candidate < current * (1 - kImprovement);
}

VPolytope as_polytope(const ConvexBody& b) { return std::get<VPolytope>(b); }

template <class T>
T get_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: bad value for \"") + key + "\"");
  }
}

}  // namespace

void SearchConfig::validate() const {
  require(n >= kMinDim && n <= kMaxDim, ErrorCode::InvalidArgument, "SearchConfig: n must be in 2..6");
  require(vertex_count >= n + 1, ErrorCode::InvalidArgument, "SearchConfig: need at least n + 1 vertices");
  require(!symmetric || (vertex_count % 2 == 0 && vertex_count >= 2 * n), ErrorCode::InvalidArgument,
          "SearchConfig: symmetric runs need an even vertex count >= 2n");
  require(!(symmetric && free_count), ErrorCode::InvalidArgument,
          "SearchConfig: symmetric runs keep the vertex count fixed");
  require(step_initial > 0 && step_floor > 0 && step_floor <= step_initial, ErrorCode::InvalidArgument,
          "SearchConfig: need 0 < step_floor <= step_initial");
  require(step_decay > 0 && step_decay < 1, ErrorCode::InvalidArgument, "SearchConfig: step_decay must be in (0, 1)");
  require(max_iterations >= 0, ErrorCode::InvalidArgument, "SearchConfig: max_iterations must be nonnegative");
}

Json config_to_json(const SearchConfig& c) {
  return Json{{"n", c.n},
              {"vertex_count", c.vertex_count},
              {"mode", mode_name(c.mode)},
              {"symmetric", c.symmetric},
              {"free_count", c.free_count},
              {"step_initial", c.step_initial},
              {"step_decay", c.step_decay},
              {"step_floor", c.step_floor},
              {"max_iterations", c.max_iterations},
              {"seed", c.seed}};
}

SearchConfig config_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::InvalidArgument, "config: expected a JSON object");
  static const std::set<std::string> known = {"n",          "vertex_count", "mode",       "symmetric",      "free_count",
                                              "step_initial", "step_decay", "step_floor", "max_iterations", "seed"};
  for (const auto& [key, value] : j.items())
    require(known.count(key) > 0, ErrorCode::InvalidArgument, "config: unknown key \"" + key + "\"");
  SearchConfig c;
  c.n = get_field(j, "n", c.n);
  c.vertex_count = get_field(j, "vertex_count", c.vertex_count);
  const std::string mode = get_field<std::string>(j, "mode", mode_name(c.mode));
  require(mode == "maximize" || mode == "minimize", ErrorCode::InvalidArgument,
          "config: mode must be maximize or minimize");
  c.mode = mode == "maximize" ? SearchMode::Maximize : SearchMode::Minimize;
  c.symmetric = get_field(j, "symmetric", c.symmetric);
  c.free_count = get_field(j, "free_count", c.free_count);
  c.step_initial = get_field(j, "step_initial", c.step_initial);
  c.step_decay = get_field(j, "step_decay", c.step_decay);
  c.step_floor = get_field(j, "step_floor", c.step_floor);
  c.max_iterations = get_field(j, "max_iterations", c.max_iterations);
  c.seed = get_field(j, "seed", c.seed);
  c.validate();
  return c;
}

CandidateDiagnostics evaluate_candidate(const VPolytope& p) {
  const MomentData mom = body_moments(p);
  CandidateDiagnostics d;
  d.frame = isotropic_frame(mom);
  d.L_K = d.frame.L_K;
  d.M_K = d.frame.M_K;
  d.volume = mom.volume;
  const VPolytope iso = as_polytope(isotropic_image(p, d.frame));
  const int n = iso.dim();
  const auto& verts = iso.vertices();

  for (std::size_t i = 0; i < verts.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (j != i) nearest = std::min(nearest, (verts[j] - verts[i]).norm());
    VertexDiagnostics v;
    v.position = verts[i];
    v.sphere_residual = verts[i].squaredNorm() * d.volume - (n + 2) * d.M_K * d.M_K;
    v.strictly_convex = strict_convexity_test(iso, verts[i]);
    try {
      v.curvature = to_string(probe_curvature(iso, verts[i], 0.25 * nearest).verdict);
    } catch (const Error& e) {
      v.curvature = std::string(to_string(e.code()));
    }
    d.vertices.push_back(std::move(v));
  }

  for (const Face& f : iso.faces()) {
    std::set<int> ids;
    for (int k : f.facets)
      for (int v : iso.facets()[k].vertices) ids.insert(v);
    Vec c = Vec::Zero(n);
    for (int v : ids) c += verts[v];
    c /= static_cast<double>(ids.size());
    FaceDiagnostics fd;
    fd.point = c;
    fd.alignment = std::acos(std::clamp(f.normal.dot(c) / c.norm(), -1.0, 1.0));
    d.faces.push_back(std::move(fd));
  }
  return d;
}

Json diagnostics_to_json(const CandidateDiagnostics& d) {
  Json verts = Json::array();
  for (const auto& v : d.vertices)
    verts.push_back(Json{{"position", vec_to_json(v.position)},
                         {"sphere_residual", v.sphere_residual},
                         {"strictly_convex", v.strictly_convex},
                         {"curvature", v.curvature}});
  Json faces = Json::array();
  for (const auto& f : d.faces) faces.push_back(Json{{"point", vec_to_json(f.point)}, {"alignment", f.alignment}});
  return Json{{"L_K", d.L_K},
              {"M_K", d.M_K},
              {"volume", d.volume},
              {"frame", frame_to_json(d.frame)},
              {"vertices", verts},
              {"faces", faces}};
}

RunLog hill_climb(const SearchConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int n = config.n;
  VPolytope current = as_polytope(isotropic_image(convex_hull(initial_points(config, rng))));
  double L = isotropy_constant(body_moments(current));
  double step = config.step_initial;
  int streak = 0;
  std::vector<IterationRecord> records;
  records.reserve(static_cast<std::size_t>(config.max_iterations));

  for (int it = 0; it < config.max_iterations; ++it) {
    PointList pts = current.vertices();
    const int count = static_cast<int>(pts.size());
    const double diam = current.diameter();
    IterationRecord rec;
    rec.iteration = it;
    rec.step = step;
    const Vec move = step * diam * rng.unit_vector(n);
    if (config.symmetric) {
      const int half = count / 2;
      rec.vertex = static_cast<int>(rng.index(static_cast<std::size_t>(half)));
      pts[rec.vertex] += move;
      pts[rec.vertex + half] -= move;
    } else {
      rec.vertex = static_cast<int>(rng.index(static_cast<std::size_t>(count)));
      pts[rec.vertex] += move;
    }

    bool accepted = false;
    try {
      const VPolytope hull = convex_hull(pts);
      const bool count_ok = config.free_count || static_cast<int>(hull.vertices().size()) == count;
      if (count_ok) {
        const double candidate = isotropy_constant(body_moments(hull));
        if (improves(config.mode, candidate, L)) {
          current = as_polytope(isotropic_image(hull));
          L = isotropy_constant(body_moments(current));
          accepted = true;
        }
      }
    } catch (const Error&) {
      // Degenerate proposals are rejections.
    }

    if (accepted) {
      streak = 0;
    } else if (++streak == kRejectionStreak) {
      step = std::max(step * config.step_decay, config.step_floor);
      streak = 0;
    }
    rec.accepted = accepted;
    rec.L_K = L;
    records.push_back(rec);
  }
  const Json diag = diagnostics_to_json(evaluate_candidate(current));
  return RunLog{config, std::move(records), std::move(current), diag};
}

Json run_to_json(const RunLog& log) {
  Json recs = Json::array();
  for (const auto& r : log.records) recs.push_back(Json::array({r.iteration, r.L_K, r.accepted, r.vertex, r.step}));
  return Json{{"format_version", kFormatVersion},
              {"config", config_to_json(log.config)},
              {"record_fields", Json::array({"iteration", "L_K", "accepted", "vertex", "step"})},
              {"records", recs},
              {"final_body", body_to_json(log.final_body)},
              {"diagnostics", log.diagnostics}};
}

RunLog run_from_json(const Json& j) {
  require(j.is_object() && j.contains("format_version"), ErrorCode::CorruptFile, "run log: missing format_version");
  require(j["format_version"].is_number_integer() && j["format_version"].get<int>() == kFormatVersion,
          ErrorCode::FormatVersionMismatch, "run log: unsupported format_version " + j["format_version"].dump());
  try {
    const SearchConfig config = config_from_json(j.at("config"));
    std::vector<IterationRecord> records;
    for (const Json& r : j.at("records")) {
      require(r.is_array() && r.size() == 5, ErrorCode::CorruptFile, "run log: bad record");
      records.push_back({r[0].get<int>(), r[1].get<double>(), r[2].get<bool>(), r[3].get<int>(), r[4].get<double>()});
    }
    const ConvexBody body = body_from_json(j.at("final_body"));
    require(std::holds_alternative<VPolytope>(body), ErrorCode::CorruptFile, "run log: final body is not a polytope");
    return RunLog{config, std::move(records), std::get<VPolytope>(body), j.at("diagnostics")};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("run log: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    throw Error(ErrorCode::CorruptFile, std::string("run log: ") + e.what());
  }
}

void save_run(const RunLog& log, const std::string& path) { write_json(path, run_to_json(log)); }

RunLog load_run(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::CorruptFile, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::CorruptFile, path + ": " + e.what());
  }
  return run_from_json(j);
}

void write_trace_csv(std::ostream& out, const RunLog& log) {
  const auto old = out.precision(17);
  out << "iteration,L_K,accepted,vertex,step\n";
  for (const auto& r : log.records)
    out << r.iteration << ',' << r.L_K << ',' << (r.accepted ? 1 : 0) << ',' << r.vertex << ',' << r.step << '\n';
  out.precision(old);
}

}  // namespace isocon

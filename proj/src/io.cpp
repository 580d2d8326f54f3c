#include "isocon/io.hpp"

#include "isocon/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace isocon {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double number(const Json& j, const char* what) {
  require(j.is_number(), ErrorCode::InvalidArgument, std::string("expected a number for ") + what);
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorCode::InvalidArgument, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec_to_json(m.row(r).transpose()));
  return out;
}

Vec vec_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::InvalidArgument, "expected a nonempty numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
  return v;
}

Mat mat_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::InvalidArgument, "expected a nonempty array of rows");
  const Vec first = vec_from_json(j[0]);
  Mat m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vec_from_json(j[r]);
    require(row.size() == first.size(), ErrorCode::InvalidArgument, "matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json body_to_json(const ConvexBody& body) {
  return std::visit(Overloaded{
                        [](const VPolytope& p) {
                          Json verts = Json::array();
                          for (const Vec& v : p.vertices()) verts.push_back(vec_to_json(v));
                          return Json{{"type", "vpolytope"}, {"vertices", verts}};
                        },
                        [](const Ball& b) {
                          return Json{{"type", "ball"}, {"center", vec_to_json(b.center())}, {"radius", b.radius()}};
                        },
                        [](const Ellipsoid& e) {
                          return Json{{"type", "ellipsoid"},
                                      {"center", vec_to_json(e.center())},
                                      {"shape", mat_to_json(e.shape())}};
                        },
                        [](const CapModel& c) {
                          const CapSpec& s = c.spec();
                          Json out{{"type", "capmodel"}, {"n", s.n},           {"R", s.R},
                                   {"a", s.a},           {"b", s.b},           {"lambda", vec_to_json(s.lambda)},
                                   {"epsilon", s.epsilon}};
                          if (c.perturbation().norm() > 0) out["perturbation"] = mat_to_json(c.perturbation());
                          return out;
                        },
                    },
                    body);
}

ConvexBody body_from_json(const Json& j) {
  const Json& type = field(j, "type");
  require(type.is_string(), ErrorCode::InvalidArgument, "\"type\" must be a string");
  const std::string t = type.get<std::string>();
  if (t == "vpolytope") {
    const Json& verts = field(j, "vertices");
    require(verts.is_array() && !verts.empty(), ErrorCode::InvalidArgument, "\"vertices\" must be a nonempty array");
    PointList pts;
    for (const Json& v : verts) pts.push_back(vec_from_json(v));
    for (const Vec& p : pts)
      require(p.size() == pts.front().size(), ErrorCode::InvalidArgument, "vertices differ in dimension");
    return convex_hull(pts);
  }
  if (t == "ball") return Ball(vec_from_json(field(j, "center")), number(field(j, "radius"), "radius"));
  if (t == "ellipsoid") return Ellipsoid(vec_from_json(field(j, "center")), mat_from_json(field(j, "shape")));
  if (t == "capmodel") {
    CapSpec s;
    const Json& n = field(j, "n");
    require(n.is_number_integer(), ErrorCode::InvalidArgument, "\"n\" must be an integer");
    s.n = n.get<int>();
    s.R = number(field(j, "R"), "R");
    s.a = number(field(j, "a"), "a");
    s.b = j.contains("b") ? number(j["b"], "b") : 0.0;
    s.lambda = j.contains("lambda") ? vec_from_json(j["lambda"]) : Vec::Ones(s.n);
    s.epsilon = j.contains("epsilon") ? number(j["epsilon"], "epsilon") : 0.0;
    std::optional<Mat> e;
    if (j.contains("perturbation")) e = mat_from_json(j["perturbation"]);
    return CapModel(s, e);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown body type \"" + t + "\"");
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
}

ConvexBody read_body(const std::string& path) { return body_from_json(read_json(path)); }

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << '\n';
  require(out.good(), ErrorCode::InvalidArgument, "write failed for " + path);
}

Json report_to_json(const IsotropyReport& r) {
  return Json{{"M_K", r.M_K},
              {"L_K", r.L_K},
              {"first_moment_resid", r.first_moment_resid},
              {"isotropy_resid", r.isotropy_resid},
              {"passed", r.passed}};
}

Json frame_to_json(const IsotropicFrame& f) {
  return Json{{"translation", vec_to_json(f.translation)}, {"A", mat_to_json(f.A)}, {"M_K", f.M_K}, {"L_K", f.L_K}};
}

Json probe_to_json(const CurvatureEstimate& e) {
  Json out{{"normal", vec_to_json(e.normal)},
           {"q", mat_to_json(e.q)},
           {"tangent_basis", mat_to_json(e.tangent_basis)},
           {"verdict", to_string(e.verdict)},
           {"radius", e.radius},
           {"samples", e.samples}};
  out["eps_hat"] = std::isfinite(e.eps_hat) ? Json(e.eps_hat) : Json(nullptr);
  return out;
}

}  // namespace isocon

#include "isocon/polytope.hpp"

#include "isocon/error.hpp"
#include "isocon/predicates.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace isocon {
namespace {

using FacetList = std::vector<std::vector<int>>;

constexpr double kFoldTolerance = 1e-11;
constexpr double kClipSnap = 1e-12;

int orient_with(std::span<const Vec> pts, const std::vector<int>& facet, int q) {
  const Vec* buf[kMaxDim + 1];
  const int n = static_cast<int>(facet.size());
  for (int i = 0; i < n; ++i) buf[i] = &pts[facet[i]];
  buf[n] = &pts[q];
  return orientation(std::span<const Vec* const>(buf, n + 1));
}

void check_input(std::span<const Vec> pts) {
  require(!pts.empty(), ErrorCode::DegenerateInput, "convex_hull: no points");
  const int n = static_cast<int>(pts.front().size());
  require(n >= kMinDim && n <= kMaxDim, ErrorCode::InvalidArgument,
          "convex_hull: dimension must be in [2, 6]");
  for (const auto& p : pts) {
    require(p.size() == n, ErrorCode::InvalidArgument, "convex_hull: mixed dimensions");
    require(p.allFinite(), ErrorCode::InvalidArgument, "convex_hull: non-finite coordinate");
  }
  require(static_cast<int>(pts.size()) >= n + 1, ErrorCode::DegenerateInput,
          "convex_hull: need at least n+1 points");
}

// Greedy choice of n+1 points far from each other's affine hull.
std::vector<int> initial_simplex(std::span<const Vec> pts, std::span<const int> ids) {
  const int n = static_cast<int>(pts.front().size());
  int first = ids[0];
  for (int id : ids) {
    const Vec& a = pts[id];
    const Vec& b = pts[first];
    if (std::lexicographical_compare(a.data(), a.data() + n, b.data(), b.data() + n)) first = id;
  }
  std::vector<int> chosen{first};
  std::vector<Vec> basis;
  for (int k = 0; k < n; ++k) {
    double best = 0.0;
    int best_id = -1;
    for (int id : ids) {
      Vec r = pts[id] - pts[first];
      for (const auto& b : basis) r -= r.dot(b) * b;
      const double d = r.norm();
      if (d > best) {
        best = d;
        best_id = id;
      }
    }
    require(best_id >= 0, ErrorCode::DegenerateInput, "convex_hull: points are not full-dimensional");
    Vec r = pts[best_id] - pts[first];
    for (const auto& b : basis) r -= r.dot(b) * b;
    basis.push_back(r / r.norm());
    chosen.push_back(best_id);
  }
  const Vec* buf[kMaxDim + 1];
  for (int i = 0; i <= n; ++i) buf[i] = &pts[chosen[i]];
  require(orientation(std::span<const Vec* const>(buf, n + 1)) != 0, ErrorCode::DegenerateInput,
          "convex_hull: points are not full-dimensional");
  return chosen;
}

FacetList beneath_beyond(std::span<const Vec> pts, std::span<const int> ids) {
  const int n = static_cast<int>(pts.front().size());
  require(static_cast<int>(ids.size()) >= n + 1, ErrorCode::DegenerateInput,
          "convex_hull: need at least n+1 points");
  const std::vector<int> simplex = initial_simplex(pts, ids);

  FacetList facets;
  for (int i = 0; i <= n; ++i) {
    std::vector<int> f;
    for (int j = 0; j <= n; ++j)
      if (j != i) f.push_back(simplex[j]);
    // The omitted simplex vertex must lie strictly on the inner side.
    if (orient_with(pts, f, simplex[i]) > 0) std::swap(f[0], f[1]);
    facets.push_back(std::move(f));
  }

  std::vector<int> todo;
  for (int id : ids)
    if (std::find(simplex.begin(), simplex.end(), id) == simplex.end()) todo.push_back(id);

  for (int p : todo) {
    std::vector<char> visible(facets.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (orient_with(pts, facets[f], p) > 0) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;

    struct RidgeUse {
      int count = 0;
      std::size_t facet = 0;
      int slot = 0;
    };
    std::map<std::vector<int>, RidgeUse> ridges;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (!visible[f]) continue;
      for (int k = 0; k < n; ++k) {
        std::vector<int> key;
        key.reserve(n - 1);
        for (int j = 0; j < n; ++j)
          if (j != k) key.push_back(facets[f][j]);
        std::sort(key.begin(), key.end());
        auto& use = ridges[key];
        ++use.count;
        use.facet = f;
        use.slot = k;
      }
    }

    FacetList next;
    next.reserve(facets.size() + ridges.size());
    for (std::size_t f = 0; f < facets.size(); ++f)
      if (!visible[f]) next.push_back(facets[f]);
    for (const auto& [key, use] : ridges) {
      if (use.count != 1) continue;
      // Replacing the dropped vertex by p keeps the outward orientation.
      std::vector<int> nf = facets[use.facet];
      nf[use.slot] = p;
      next.push_back(std::move(nf));
    }
    facets = std::move(next);
  }
  return facets;
}

// Vertices incident to a ridge whose two facets are coplanar.
std::set<int> coplanar_suspects(std::span<const Vec> pts, const FacetList& facets) {
  const int n = static_cast<int>(pts.front().size());
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, int>>> ridges;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    for (int k = 0; k < n; ++k) {
      std::vector<int> key;
      for (int j = 0; j < n; ++j)
        if (j != k) key.push_back(facets[f][j]);
      std::sort(key.begin(), key.end());
      ridges[key].emplace_back(f, k);
    }
  }
  std::set<int> suspects;
  for (const auto& [key, uses] : ridges) {
    if (uses.size() != 2) continue;
    const int opposite = facets[uses[1].first][uses[1].second];
    if (orient_with(pts, facets[uses[0].first], opposite) == 0) suspects.insert(key.begin(), key.end());
  }
  return suspects;
}

Vec facet_normal(std::span<const Vec> pts, const std::vector<int>& facet, const Vec& inner) {
  const int n = static_cast<int>(facet.size());
  Mat edges(n, n - 1);
  for (int k = 1; k < n; ++k) edges.col(k - 1) = pts[facet[k]] - pts[facet[0]];
  Eigen::HouseholderQR<Mat> qr(edges);
  Vec normal = Mat(qr.householderQ()).col(n - 1);
  if (normal.dot(inner - pts[facet[0]]) > 0) normal = -normal;
  return normal;
}

std::vector<int> facet_vertex_set(const FacetList& facets) {
  std::set<int> s;
  for (const auto& f : facets) s.insert(f.begin(), f.end());
  return {s.begin(), s.end()};
}

}  // namespace

HullIndices hull_indices(std::span<const Vec> points) {
  check_input(points);
  std::vector<int> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  FacetList facets = beneath_beyond(points, all);
  std::vector<int> current = facet_vertex_set(facets);

  const int n = static_cast<int>(points.front().size());
  Vec inner = Vec::Zero(n);
  for (int v : current) inner += points[v];
  inner /= static_cast<double>(current.size());
  std::vector<Vec> normals;
  normals.reserve(facets.size());
  for (const auto& f : facets) normals.push_back(facet_normal(points, f, inner));
  double scale = 0.0;
  for (int v : current) scale = std::max(scale, (points[v] - inner).norm());

  bool removed = false;
  for (int v : coplanar_suspects(points, facets)) {
    // The summed normals of the incident facets lie inside the normal cone
    // of v, so an extreme point is the unique maximizer of that direction
    // with a clear margin. Only unresolved points get the exact re-hull.
    Vec u = Vec::Zero(n);
    for (std::size_t f = 0; f < facets.size(); ++f)
      if (std::find(facets[f].begin(), facets[f].end(), v) != facets[f].end()) u += normals[f];
    double margin = std::numeric_limits<double>::infinity();
    for (int w : current)
      if (w != v) margin = std::min(margin, u.dot(points[v] - points[w]));
    if (margin > 1e-9 * u.norm() * scale) continue;

    std::vector<int> others;
    for (int w : current)
      if (w != v) others.push_back(w);
    try {
      const FacetList sub = beneath_beyond(points, others);
      const bool inside = std::all_of(sub.begin(), sub.end(), [&](const std::vector<int>& f) {
        return orient_with(points, f, v) <= 0;
      });
      if (inside) {
        current = std::move(others);
        removed = true;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
    }
  }
  if (removed) facets = beneath_beyond(points, current);
  return HullIndices{facet_vertex_set(facets), std::move(facets)};
}

Halfspace::Halfspace(Vec normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  require(std::abs(normal_.norm() - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "Halfspace: normal must be a unit vector");
}

VPolytope convex_hull(std::span<const Vec> points) {
  HullIndices h = hull_indices(points);
  std::vector<int> remap(points.size(), -1);
  PointList verts;
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    remap[h.vertices[i]] = static_cast<int>(i);
    verts.push_back(points[h.vertices[i]]);
  }
  for (auto& f : h.facets)
    for (int& v : f) v = remap[v];
  return VPolytope(std::move(verts), h.facets);
}

VPolytope::VPolytope(PointList vertices, const std::vector<std::vector<int>>& facets)
    : dim_(static_cast<int>(vertices.front().size())), vertices_(std::move(vertices)) {
  const int n = dim_;
  const Vec anchor = vertex_centroid();
  double factorial = 1.0;
  for (int k = 2; k < n; ++k) factorial *= k;

  facets_.reserve(facets.size());
  for (const auto& idx : facets) {
    Facet f;
    f.vertices = idx;
    Mat edges(n, n - 1);
    for (int j = 1; j < n; ++j) edges.col(j - 1) = vertices_[idx[j]] - vertices_[idx[0]];
    Eigen::HouseholderQR<Mat> qr(edges);
    Mat q = qr.householderQ();
    Vec normal = q.col(n - 1);
    Vec mean = Vec::Zero(n);
    for (int v : idx) mean += vertices_[v];
    mean /= n;
    if (normal.dot(mean - anchor) < 0) normal = -normal;
    f.normal = normal;
    f.offset = normal.dot(mean);
    const double gram = (edges.transpose() * edges).determinant();
    f.area = std::sqrt(std::max(gram, 0.0)) / factorial;
    facets_.push_back(std::move(f));
  }

  // Merge facets across coplanar ridges.
  std::vector<int> parent(facets_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> ridges;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    for (int k = 0; k < n; ++k) {
      std::vector<int> key;
      for (int j = 0; j < n; ++j)
        if (j != k) key.push_back(facets[f][j]);
      std::sort(key.begin(), key.end());
      ridges[key].emplace_back(static_cast<int>(f), k);
    }
  }
  for (const auto& [key, uses] : ridges) {
    if (uses.size() != 2) continue;
    const int opposite = facets[uses[1].first][uses[1].second];
    const auto& na = facets_[uses[0].first].normal;
    const auto& nb = facets_[uses[1].first].normal;
    // Exactly coplanar neighbours, or folds below rounding level such as the
    // cut face produced by clipping.
    if ((na - nb).norm() <= kFoldTolerance || orient_with(vertices_, facets[uses[0].first], opposite) == 0)
      parent[find(uses[0].first)] = find(uses[1].first);
  }

  std::map<int, int> face_of_root;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    const int root = find(static_cast<int>(f));
    auto [it, inserted] = face_of_root.try_emplace(root, static_cast<int>(faces_.size()));
    if (inserted) faces_.push_back(Face{Vec::Zero(n), 0.0, 0.0, {}});
    Face& face = faces_[it->second];
    face.facets.push_back(static_cast<int>(f));
    face.normal += facets_[f].area * facets_[f].normal;
    face.area += facets_[f].area;
    facets_[f].face = it->second;
  }
  face_normals_.resize(static_cast<Eigen::Index>(faces_.size()), n);
  face_offsets_.resize(static_cast<Eigen::Index>(faces_.size()));
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    Face& face = faces_[i];
    face.normal.normalize();
    std::set<int> verts;
    for (int f : face.facets) verts.insert(facets_[f].vertices.begin(), facets_[f].vertices.end());
    double off = 0.0;
    for (int v : verts) off += face.normal.dot(vertices_[v]);
    face.offset = off / static_cast<double>(verts.size());
    face_normals_.row(static_cast<Eigen::Index>(i)) = face.normal.transpose();
    face_offsets_[static_cast<Eigen::Index>(i)] = face.offset;
  }
}

Vec VPolytope::vertex_centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

double VPolytope::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  return d;
}

double VPolytope::signed_gap(const Vec& x) const { return (face_normals_ * x - face_offsets_).maxCoeff(); }

VPolytope clip_halfspace(const VPolytope& p, const Halfspace& h) {
  const int n = p.dim();
  require(h.normal().size() == n, ErrorCode::InvalidArgument, "clip_halfspace: dimension mismatch");
  const auto& verts = p.vertices();
  const std::size_t nv = verts.size();
  // Vertices within the snap distance of the plane count as lying on it, so
  // no intersection point is created next to them.
  const double snap = kClipSnap * p.diameter();
  std::vector<int> side(nv);
  bool strictly_inside = false;
  bool any_outside = false;
  std::vector<double> dist(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    dist[i] = h.normal().dot(verts[i]) - h.offset();
    side[i] = dist[i] < -snap ? -1 : (dist[i] > snap ? 1 : 0);
    strictly_inside = strictly_inside || side[i] < 0;
    any_outside = any_outside || side[i] > 0;
  }
  require(strictly_inside, ErrorCode::EmptyIntersection, "clip_halfspace: halfspace misses the polytope interior");
  if (!any_outside) return p;

  // Two vertices span an edge when the faces containing both have normals of
  // rank n - 1.
  std::vector<std::vector<int>> faces_of(nv);
  for (const auto& f : p.facets())
    for (int v : f.vertices) faces_of[v].push_back(f.face);
  for (auto& fs : faces_of) {
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  }
  auto is_edge = [&](std::size_t i, std::size_t j) {
    std::vector<int> common;
    std::set_intersection(faces_of[i].begin(), faces_of[i].end(), faces_of[j].begin(), faces_of[j].end(),
                          std::back_inserter(common));
    if (static_cast<int>(common.size()) < n - 1) return false;
    Mat normals(static_cast<Eigen::Index>(common.size()), n);
    for (std::size_t k = 0; k < common.size(); ++k)
      normals.row(static_cast<Eigen::Index>(k)) = p.faces()[common[k]].normal.transpose();
    Eigen::JacobiSVD<Mat> svd(normals);
    const auto& sv = svd.singularValues();
    return sv.size() >= n - 1 && sv(n - 2) > 1e-9;
  };

  PointList candidates;
  for (std::size_t i = 0; i < nv; ++i)
    if (side[i] <= 0) candidates.push_back(verts[i]);
  for (std::size_t i = 0; i < nv; ++i) {
    if (side[i] >= 0) continue;
    for (std::size_t j = 0; j < nv; ++j) {
      if (side[j] <= 0 || !is_edge(i, j)) continue;
      const double s = dist[i] / (dist[i] - dist[j]);
      candidates.push_back(verts[i] + s * (verts[j] - verts[i]));
    }
  }
  try {
    return convex_hull(candidates);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateInput) throw Error(ErrorCode::EmptyIntersection, "clip_halfspace: empty interior");
    throw;
  }
}

std::vector<Simplex> triangulate(const VPolytope& p) {
  const int n = p.dim();
  if (static_cast<int>(p.vertices().size()) == n + 1) return {Simplex{p.vertices()}};
  const Vec anchor = p.vertex_centroid();
  std::vector<Simplex> out;
  out.reserve(p.facets().size());
  for (const auto& f : p.facets()) {
    Simplex s;
    s.points.reserve(n + 1);
    s.points.push_back(anchor);
    for (int v : f.vertices) s.points.push_back(p.vertices()[v]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace isocon

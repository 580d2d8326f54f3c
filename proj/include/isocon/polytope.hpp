#pragma once

#include "isocon/types.hpp"

#include <span>
#include <vector>

namespace isocon {

/// One simplicial piece of a triangulated hull boundary, oriented outward.
struct Facet {
  std::vector<int> vertices;  // indices into VPolytope::vertices()
  Vec normal;                 // outward unit normal
  double offset = 0.0;        // <normal, x> on the facet hyperplane
  double area = 0.0;          // (n-1)-volume
  int face = -1;              // index of the merged coplanar face
};

/// Coplanar facets merged into one supporting hyperplane.
struct Face {
  Vec normal;
  double offset = 0.0;
  double area = 0.0;
  std::vector<int> facets;
};

/// {X : <X, normal> <= offset}; the normal is unit length to 1e-12.
class Halfspace {
 public:
  Halfspace(Vec normal, double offset);

  const Vec& normal() const { return normal_; }
  double offset() const { return offset_; }
  Halfspace complement() const { return Halfspace(-normal_, -offset_); }

 private:
  Vec normal_;
  double offset_;
};

/// Full-dimensional convex polytope given by its extreme points.
///
/// Built only through convex_hull(), so the vertex list is always minimal and
/// the triangulated boundary plus the merged H-representation are available.
class VPolytope {
 public:
  int dim() const { return dim_; }
  const PointList& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Rows are outward unit face normals; pairs with face_offsets().
  const Mat& face_normals() const { return face_normals_; }
  const Vec& face_offsets() const { return face_offsets_; }

  Vec vertex_centroid() const;
  double diameter() const;

  /// max over faces of <n, x> - b; zero on the boundary, negative inside.
  double signed_gap(const Vec& x) const;
  bool contains(const Vec& x, double tol = 0.0) const { return signed_gap(x) <= tol; }

 private:
  friend VPolytope convex_hull(std::span<const Vec> points);
  VPolytope(PointList vertices, const std::vector<std::vector<int>>& facets);

  int dim_ = 0;
  PointList vertices_;
  std::vector<Facet> facets_;
  std::vector<Face> faces_;
  Mat face_normals_;
  Vec face_offsets_;
};

/// Simplicial hull structure in terms of input indices.
struct HullIndices {
  std::vector<int> vertices;                // extreme points, ascending input order
  std::vector<std::vector<int>> facets;     // outward-oriented simplicial facets
};

/// Beneath-beyond hull with exact orientation predicates; non-extreme points
/// that land on flat faces are removed afterwards.
HullIndices hull_indices(std::span<const Vec> points);

/// Throws DegenerateInput when the points do not span R^n (2 <= n <= 6).
VPolytope convex_hull(std::span<const Vec> points);

/// P intersected with h. Throws EmptyIntersection when the result has empty interior.
VPolytope clip_halfspace(const VPolytope& p, const Halfspace& h);

struct Simplex {
  PointList points;  // n+1 points of R^n
};

/// Cone from the vertex centroid over every boundary facet; a simplex is
/// returned as itself.
std::vector<Simplex> triangulate(const VPolytope& p);

}  // namespace isocon

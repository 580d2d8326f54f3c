#pragma once

#include "isocon/curvature.hpp"
#include "isocon/io.hpp"
#include "isocon/isotropy.hpp"
#include "isocon/polytope.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace isocon {

enum class SearchMode { Maximize, Minimize };

struct SearchConfig {
  int n = 2;
  int vertex_count = 6;
  SearchMode mode = SearchMode::Maximize;
  bool symmetric = false;   // proposals move antipodal vertex pairs
  bool free_count = false;  // allow proposals that change the vertex count
  double step_initial = 0.1;  // displacement as a fraction of the diameter
  double step_decay = 0.5;
  double step_floor = 1e-6;
  int max_iterations = 4000;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument unless vertex_count >= n + 1 (even and >= 2n when
  /// symmetric), 0 < step_floor <= step_initial, 0 < step_decay < 1 and
  /// max_iterations >= 0. Symmetric runs keep the vertex count fixed.
  void validate() const;
};

Json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const Json& j);

struct VertexDiagnostics {
  Vec position;            // in the isotropic image
  double sphere_residual;  // |X|^2 |K| - (n+2) M_K^2
  bool strictly_convex;
  std::string curvature;   // probe verdict at the vertex
};

struct FaceDiagnostics {
  Vec point;             // centroid of the face's vertices, isotropic image
  double alignment = 0;  // angle between the face normal and the point
};

struct CandidateDiagnostics {
  double L_K = 0.0;
  double M_K = 0.0;
  double volume = 0.0;
  IsotropicFrame frame;
  std::vector<VertexDiagnostics> vertices;
  std::vector<FaceDiagnostics> faces;
};

/// Moves P to isotropic position and tags every vertex and face.
/// Throws DegenerateBody.
CandidateDiagnostics evaluate_candidate(const VPolytope& p);

Json diagnostics_to_json(const CandidateDiagnostics& d);

struct IterationRecord {
  int iteration = 0;
  double L_K = 0.0;  // of the current body after this iteration
  bool accepted = false;
  int vertex = -1;   // moved vertex (first of the pair when symmetric)
  double step = 0.0;
};

struct RunLog {
  SearchConfig config;
  std::vector<IterationRecord> records;
  VPolytope final_body;
  Json diagnostics;  // diagnostics_to_json of the final body
};

/// A proposal is accepted when the new hull is full-dimensional, keeps the
/// vertex count (unless free_count) and improves L_K by more than 1e-12
/// relative in the mode's direction. The accepted body is replaced by its
/// isotropic image. After 20 consecutive rejections the step shrinks by
/// step_decay, never below step_floor.
RunLog hill_climb(const SearchConfig& config);

Json run_to_json(const RunLog& log);
/// Throws FormatVersionMismatch or CorruptFile.
RunLog run_from_json(const Json& j);
void save_run(const RunLog& log, const std::string& path);
RunLog load_run(const std::string& path);

/// iteration,L_K,accepted,vertex,step
void write_trace_csv(std::ostream& out, const RunLog& log);

}  // namespace isocon

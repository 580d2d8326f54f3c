#pragma once

#include "isocon/body.hpp"
#include "isocon/curvature.hpp"
#include "isocon/isotropy.hpp"

#include "json.hpp"

#include <string>

namespace isocon {

using Json = nlohmann::json;

Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);  // row-major
/// Throw InvalidArgument on shape or type errors.
Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);

/// {"type": "vpolytope", "vertices": [[...], ...]}
/// {"type": "ball", "center": [...], "radius": r}
/// {"type": "ellipsoid", "center": [...], "shape": [[...], ...]}
/// {"type": "capmodel", "n", "R", "a", "b", "lambda", "epsilon", optional "perturbation"}
Json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const Json& j);

/// Parse errors and malformed bodies throw InvalidArgument; geometric
/// failures keep their own codes (DegenerateInput for flat vertex sets).
ConvexBody read_body(const std::string& path);
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

Json report_to_json(const IsotropyReport& r);
Json frame_to_json(const IsotropicFrame& f);
Json probe_to_json(const CurvatureEstimate& e);

}  // namespace isocon

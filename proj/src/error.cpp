#include "isocon/error.hpp"

namespace isocon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::LowAcceptance: return "LowAcceptance";
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::PointInside: return "PointInside";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::InsufficientSchedule: return "InsufficientSchedule";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::FlatPoint: return "FlatPoint";
    case ErrorCode::NonUniqueNormal: return "NonUniqueNormal";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace isocon

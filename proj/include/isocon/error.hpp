#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isocon {

enum class ErrorCode {
  InvalidArgument,
  DegenerateInput,
  EmptyIntersection,
  LowAcceptance,
  DegenerateBody,
  NotIsotropic,
  PointInside,
  NotSymmetric,
  InsufficientSchedule,
  NotOnBoundary,
  FlatPoint,
  NonUniqueNormal,
  QuadratureFailure,
  FormatVersionMismatch,
  CorruptFile,
  Unsupported,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported through this type;
/// `code()` identifies the failure class named in the operation contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace isocon

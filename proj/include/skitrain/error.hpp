#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skitrain {

enum class ErrorKind {
  EmptySeries,
  UnorderedInput,
  CalibrationPoseInvalid,
  UnknownLevel,
  InvalidParams,
  OutOfTerrain,
  InsufficientCalibrationData,
  DegenerateRange,
  ZeroVariance,
  InsufficientData,
  InvalidInput,
  ParseError,
  IoError,
};

std::string_view error_kind_name(ErrorKind kind);

/// Domain error carrying a machine-readable kind. The what() string is
/// "<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace skitrain

#include "skitrain/error.hpp"

namespace skitrain {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::UnorderedInput: return "UnorderedInput";
    case ErrorKind::CalibrationPoseInvalid: return "CalibrationPoseInvalid";
    case ErrorKind::UnknownLevel: return "UnknownLevel";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::OutOfTerrain: return "OutOfTerrain";
    case ErrorKind::InsufficientCalibrationData: return "InsufficientCalibrationData";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace skitrain

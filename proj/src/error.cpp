#include "volmark/error.hpp"

namespace volmark {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::MissingComponentIndex: return "MissingComponentIndex";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MissingOriginalDims: return "MissingOriginalDims";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::InconsistentBands: return "InconsistentBands";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::EmptyKey: return "EmptyKey";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::InsufficientValues: return "InsufficientValues";
    case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorCode::DimsNotAligned: return "DimsNotAligned";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::MapVersionUnsupported: return "MapVersionUnsupported";
    case ErrorCode::NTooLarge: return "NTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::DegenerateReference: return "DegenerateReference";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::EmptyRoi: return "EmptyRoi";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace volmark

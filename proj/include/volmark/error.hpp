#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volmark {

enum class ErrorCode {
  UnknownFormat,
  CorruptHeader,
  ValueOutOfRange,
  MissingComponentIndex,
  IoFailure,
  MissingOriginalDims,
  OddDimension,
  InconsistentBands,
  OutOfBounds,
  EmptyKey,
  Diverged,
  InsufficientValues,
  InsufficientCapacity,
  DimsNotAligned,
  DimsMismatch,
  MapVersionUnsupported,
  NTooLarge,
  LengthMismatch,
  CorruptFile,
  EmptyVector,
  DegenerateReference,
  OutOfRange,
  BadParameter,
  EmptyRoi,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; `code()` is
// stable and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace volmark

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsiproj {

enum class ErrorCode {
  NonFinite,
  NotSquare,
  SingularB,
  RankDeficient,
  DimensionMismatch,
  NonPositiveSigma,
  TooFewSamples,
  ReducedDimTooLarge,
  ReducedDimTooSmall,
  EvenWindow,
  OutOfBounds,
  SingleClass,
  EmptyClass,
  ZeroVector,
  InvalidSparsity,
  MalformedHeader,
  SizeMismatch,
  UnsupportedDataType,
  InsufficientSamples,
  BadSpec,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can report it in a structured way.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hsiproj

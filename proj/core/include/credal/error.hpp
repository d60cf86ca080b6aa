#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace credal {

enum class ErrorCode {
  InvalidArgument,
  InvalidProbability,
  DimensionMismatch,
  EmptyCalibration,
  EmptyRegion,
  SureLossViolation,
  LabelSpaceTooLarge,
  LengthMismatch,
  InvalidSpec,
  UnsupportedDimension,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// 1-based input line, set for parse and validation failures.
  std::optional<std::size_t> line() const noexcept { return line_; }
  /// The message without the code and line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

}  // namespace credal

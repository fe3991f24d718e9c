#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riccati {

enum class ErrorCode {
  InvalidArgument,
  DomainExceeded,
  StepSizeUnderflow,
  DegenerateTriple,
  PoleValue,
  WrongInitialData,
  LogDomain,
  CoefficientVanishes,
  NonUnitDeterminant,
  SolutionMismatch,
  BothZero,
  PoleOnPath,
  ZeroData,
  HermiteZero,
  DenominatorZero,
  NoSignChange,
  SeriesStartFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, where it applies, the
/// grid node at which the failure was detected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> node = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> node() const noexcept { return node_; }

  /// The message without the code prefix and node suffix of what().
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::size_t> node_;
};

}  // namespace riccati

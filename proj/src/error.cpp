#include "riccati/error.hpp"

#include <fmt/format.h>

namespace riccati {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainExceeded: return "DomainExceeded";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::PoleValue: return "PoleValue";
    case ErrorCode::WrongInitialData: return "WrongInitialData";
    case ErrorCode::LogDomain: return "LogDomain";
    case ErrorCode::CoefficientVanishes: return "CoefficientVanishes";
    case ErrorCode::NonUnitDeterminant: return "NonUnitDeterminant";
    case ErrorCode::SolutionMismatch: return "SolutionMismatch";
    case ErrorCode::BothZero: return "BothZero";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::ZeroData: return "ZeroData";
    case ErrorCode::HermiteZero: return "HermiteZero";
    case ErrorCode::DenominatorZero: return "DenominatorZero";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::SeriesStartFailure: return "SeriesStartFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> node) {
  if (node) {
    return fmt::format("{}: {} (node {})", to_string(code), message, *node);
  }
  return fmt::format("{}: {}", to_string(code), message);
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> node)
    : std::runtime_error(decorate(code, message, node)),
      code_(code),
      message_(message),
      node_(node) {}

}  // namespace riccati

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qms {

enum class ErrorKind {
  InvalidArgument,
  DenominatorNotInvertible,
  BasePointInvalid,
  DegeneratePoint,
  DegenerateJ,
  SingularCurve,
  NotInFamily,
  BadReduction,
  NotQMShape,
  NoSplitPrimes,
  MissingPrime,
  BudgetExceeded,
  PrimeDividesModulus,
  Inconsistent,
  ProbeFailure,
  TraceMismatch,
  MissingEigenvalue,
  SchemaError,
  UnknownField,
  DuplicatePrime,
  HeckeBoundViolation,
  FieldMismatch,
  NetworkError,
  NotFound,
  ConversionError,
  FieldDoesNotSplit,
  FixtureMissing,
};

std::string_view to_string(ErrorKind kind);

// Every library failure carries a kind so the CLI can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// True for failures caused by mathematics rather than by bad input.
bool is_verification_failure(ErrorKind kind);

}  // namespace qms

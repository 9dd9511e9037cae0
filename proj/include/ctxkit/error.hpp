#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctxkit {

enum class ErrorCode {
  // scenario construction
  EmptyInput,
  DuplicateObservable,
  DuplicateOutcome,
  TooFewOutcomes,
  EmptyContext,
  UnknownObservable,
  DuplicateObservableInContext,
  CoverNotCovering,
  SubsumedContext,
  // model validation
  ArityMismatch,
  NegativeProbability,
  RowNotNormalized,
  NotASubcontext,
  EpsilonOutOfRange,
  EmptySupport,
  // analysis
  EnumerationTooLarge,
  WrongScenarioShape,
  NotCyclicScenario,
  InvalidLinearProgram,
  NumericalFailure,
  // schema + pipeline
  TooFewModifiers,
  InvalidLexicon,
  ZeroMass,
  InvalidRecord,
  ParseError,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the one error family the CLI reports with exit status 3.
constexpr bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::NumericalFailure;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctxkit

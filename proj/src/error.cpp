#include "ctxkit/error.hpp"

namespace ctxkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DuplicateObservable: return "DuplicateObservable";
    case ErrorCode::DuplicateOutcome: return "DuplicateOutcome";
    case ErrorCode::TooFewOutcomes: return "TooFewOutcomes";
    case ErrorCode::EmptyContext: return "EmptyContext";
    case ErrorCode::UnknownObservable: return "UnknownObservable";
    case ErrorCode::DuplicateObservableInContext: return "DuplicateObservableInContext";
    case ErrorCode::CoverNotCovering: return "CoverNotCovering";
    case ErrorCode::SubsumedContext: return "SubsumedContext";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::NotASubcontext: return "NotASubcontext";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::WrongScenarioShape: return "WrongScenarioShape";
    case ErrorCode::NotCyclicScenario: return "NotCyclicScenario";
    case ErrorCode::InvalidLinearProgram: return "InvalidLinearProgram";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::TooFewModifiers: return "TooFewModifiers";
    case ErrorCode::InvalidLexicon: return "InvalidLexicon";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace ctxkit

#include "polex/error.hpp"

#include <utility>

namespace polex {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDuplicateTag: return "DuplicateTag";
    case ErrorCode::kEmptyName: return "EmptyName";
    case ErrorCode::kInvalidTagName: return "InvalidTagName";
    case ErrorCode::kEmptyUniverse: return "EmptyUniverse";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kEmptyScenario: return "EmptyScenario";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kDuplicateTarget: return "DuplicateTarget";
    case ErrorCode::kUniverseMismatch: return "UniverseMismatch";
    case ErrorCode::kDuplicateScenario: return "DuplicateScenario";
    case ErrorCode::kMissingDecision: return "MissingDecision";
    case ErrorCode::kInvalidWeight: return "InvalidWeight";
    case ErrorCode::kInvalidWeightConfig: return "InvalidWeightConfig";
    case ErrorCode::kCyclicOrder: return "CyclicOrder";
    case ErrorCode::kUnknownGroupInRelation: return "UnknownGroupInRelation";
    case ErrorCode::kEmptyLabeledSet: return "EmptyLabeledSet";
    case ErrorCode::kTooFewExamples: return "TooFewExamples";
    case ErrorCode::kSessionClosed: return "SessionClosed";
    case ErrorCode::kStaleSuggestion: return "StaleSuggestion";
    case ErrorCode::kExhaustedSpace: return "ExhaustedSpace";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& locator) {
  std::string out(to_string(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  if (!locator.empty()) {
    out += " (at ";
    out += locator;
    out += ')';
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string locator,
             std::vector<std::string> path)
    : std::runtime_error(compose(code, message, locator)),
      code_(code),
      detail_(message),
      locator_(std::move(locator)),
      path_(std::move(path)) {}

}  // namespace polex

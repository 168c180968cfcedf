#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polex {

enum class ErrorCode {
  kDuplicateTag,
  kEmptyName,
  kInvalidTagName,
  kEmptyUniverse,
  kUnknownTag,
  kEmptyScenario,
  kUnknownTarget,
  kDuplicateTarget,
  kUniverseMismatch,
  kDuplicateScenario,
  kMissingDecision,
  kInvalidWeight,
  kInvalidWeightConfig,
  kCyclicOrder,
  kUnknownGroupInRelation,
  kEmptyLabeledSet,
  kTooFewExamples,
  kSessionClosed,
  kStaleSuggestion,
  kExhaustedSpace,
  kMissingGroundTruth,
  kInvalidArgument,
  kParseError,
  kValidationError,
  kFingerprintMismatch,
  kIoError,
};

// Stable identifier used in CLI messages and API error payloads, e.g. "UnknownTag".
std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported as polex::Error. `locator` names the
// offending row/field when the error comes from a document; `path` carries
// the group cycle for kCyclicOrder.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string locator = {},
        std::vector<std::string> path = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& locator() const noexcept { return locator_; }
  const std::vector<std::string>& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::string locator_;
  std::vector<std::string> path_;
};

}  // namespace polex

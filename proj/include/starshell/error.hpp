#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace starshell {

// Every failure the library raises carries one of these kinds so callers
// can branch without string matching.
enum class ErrorKind {
  // provider
  kBackendUnreachable,
  kMalformedResponse,
  kContextLimitExceeded,
  kScriptExhausted,
  kUnknownModel,
  kInvalidPricing,
  kProviderUnconfigured,
  // sandbox
  kSpawnFailure,
  // skills
  kMissingStatusLine,
  kUnknownStatusValue,
  kDuplicateStatusLine,
  kPathEscape,
  kIllegalTransition,
  kNotFound,
  // agent
  kUnknownPlatformProfile,
  kDuplicateToolName,
  kNoPlanHeading,
  kEmptyPlan,
  kInvalidConfig,
  // platform
  kMalformedToken,
  kUnknownTable,
  kUnknownField,
  kMalformedFixture,
  kPortInUse,
  // harness
  kInvalidTask,
  kEnvironmentFailure,
  kInvalidArgument,
  kMismatchedTaskSets,
  kSuiteNotFound,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace starshell

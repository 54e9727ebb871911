#include "starshell/error.hpp"

namespace starshell {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBackendUnreachable: return "backend-unreachable";
    case ErrorKind::kMalformedResponse: return "malformed-response";
    case ErrorKind::kContextLimitExceeded: return "context-limit-exceeded";
    case ErrorKind::kScriptExhausted: return "script-exhausted";
    case ErrorKind::kUnknownModel: return "unknown-model";
    case ErrorKind::kInvalidPricing: return "invalid-pricing";
    case ErrorKind::kProviderUnconfigured: return "provider-unconfigured";
    case ErrorKind::kSpawnFailure: return "spawn-failure";
    case ErrorKind::kMissingStatusLine: return "missing-status-line";
    case ErrorKind::kUnknownStatusValue: return "unknown-status-value";
    case ErrorKind::kDuplicateStatusLine: return "duplicate-status-line";
    case ErrorKind::kPathEscape: return "path-escape";
    case ErrorKind::kIllegalTransition: return "illegal-transition";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kUnknownPlatformProfile: return "unknown-platform-profile";
    case ErrorKind::kDuplicateToolName: return "duplicate-name";
    case ErrorKind::kNoPlanHeading: return "no-plan-heading";
    case ErrorKind::kEmptyPlan: return "empty-plan";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kMalformedToken: return "malformed-token";
    case ErrorKind::kUnknownTable: return "unknown-table";
    case ErrorKind::kUnknownField: return "unknown-field-in-order";
    case ErrorKind::kMalformedFixture: return "malformed-fixture";
    case ErrorKind::kPortInUse: return "port-in-use";
    case ErrorKind::kInvalidTask: return "invalid-task";
    case ErrorKind::kEnvironmentFailure: return "environment-failure";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kMismatchedTaskSets: return "mismatched-task-sets";
    case ErrorKind::kSuiteNotFound: return "suite-not-found";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace starshell

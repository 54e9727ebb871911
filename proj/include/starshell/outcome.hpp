#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace starshell {

enum class OutcomeCategory {
  kSuccess,
  kSuccessTruncated,
  kNonJsonSuccess,
  kApiError,
  kShellError,
  kEmptyResponse,
  kCurlError,
  kJsonParseError,
  kPythonError,
  kTimeout,
  kHtmlRedirect,
};

inline constexpr std::array<OutcomeCategory, 11> kAllOutcomeCategories{
    OutcomeCategory::kSuccess,        OutcomeCategory::kSuccessTruncated, OutcomeCategory::kNonJsonSuccess,
    OutcomeCategory::kApiError,       OutcomeCategory::kShellError,       OutcomeCategory::kEmptyResponse,
    OutcomeCategory::kCurlError,      OutcomeCategory::kJsonParseError,   OutcomeCategory::kPythonError,
    OutcomeCategory::kTimeout,        OutcomeCategory::kHtmlRedirect,
};

// Display labels, e.g. "Success (trunc.)".
std::string_view to_string(OutcomeCategory category);
std::optional<OutcomeCategory> parse_outcome_category(std::string_view label);
bool is_success(OutcomeCategory category);

struct ExecFlags {
  int exit_code = 0;
  bool timed_out = false;
};

// Total and pure. Checks, first match wins: Timeout, Shell error, Curl
// error, HTML redirect, API error, JSON parse error, Python error, Empty
// response, Success (trunc.), Success, Non-JSON success. A nonzero exit
// that matched nothing else is a Shell error.
OutcomeCategory classify_outcome(std::string_view observation, ExecFlags exec = {});

}  // namespace starshell

#include "starshell/outcome.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "starshell/sandbox.hpp"

namespace starshell {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Pred>
bool any_line(std::string_view text, Pred pred) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (pred(line)) return true;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return false;
}

bool contains(std::string_view text, std::string_view needle) { return text.find(needle) != std::string_view::npos; }

// Drops the "[exit code: N]" line ExecResult::render appends.
std::string_view strip_exit_suffix(std::string_view s) {
  const auto start = s.rfind("[exit code: ");
  if (start == std::string_view::npos || !s.ends_with("]")) return s;
  if (start != 0 && s[start - 1] != '\n') return s;
  const auto digits = s.substr(start + 12, s.size() - start - 13);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '-';
      })) {
    return s;
  }
  return s.substr(0, start == 0 ? 0 : start - 1);
}

bool is_shell_diagnostic(std::string_view text) {
  return any_line(text, [](std::string_view line) {
    for (std::string_view prefix : {"sh: ", "/bin/sh: ", "bash: ", "/bin/bash: ", "dash: ", "zsh: "}) {
      if (line.starts_with(prefix)) return true;
    }
    return contains(line, "Syntax error:") || contains(line, "syntax error") ||
           contains(line, "command not found") || contains(line, "unexpected EOF while looking");
  });
}

bool is_curl_error(std::string_view text) {
  for (auto pos = text.find("curl: ("); pos != std::string_view::npos; pos = text.find("curl: (", pos + 1)) {
    std::size_t i = pos + 7;
    const std::size_t digits_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > digits_start && i < text.size() && text[i] == ')') return true;
  }
  return false;
}

bool is_meta_refresh(std::string_view text) {
  std::string low(text);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto pos = low.find("<meta"); pos != std::string::npos; pos = low.find("<meta", pos + 1)) {
    const auto close = low.find('>', pos);
    const std::string_view tag = std::string_view(low).substr(pos, close == std::string::npos ? std::string::npos : close - pos);
    const auto equiv = tag.find("http-equiv");
    if (equiv != std::string_view::npos && tag.find("refresh", equiv) != std::string_view::npos) return true;
  }
  return false;
}

bool starts_like_error_envelope(std::string_view body) {
  if (!body.starts_with('{')) return false;
  body = trim(body.substr(1));
  if (!body.starts_with("\"error\"")) return false;
  body = trim(body.substr(7));
  return body.starts_with(':');
}

bool is_jq_error(std::string_view text) {
  return any_line(text, [](std::string_view line) {
    return line.starts_with("jq: error") || line.starts_with("parse error: ");
  });
}

bool is_python_error(std::string_view text) {
  if (contains(text, "Traceback (most recent call last)") || contains(text, "JSONDecodeError")) return true;
  return any_line(text, [](std::string_view line) {
    const auto colon = line.find(": ");
    if (colon == std::string_view::npos || colon == 0) return false;
    const auto name = line.substr(0, colon);
    const bool identifier = std::all_of(name.begin(), name.end(), [](unsigned char c) {
      return std::isalnum(c) || c == '_' || c == '.';
    });
    return identifier && std::isalpha(static_cast<unsigned char>(name.front())) &&
           (name.ends_with("Error") || name.ends_with("Exception"));
  });
}

bool parses_as_json(std::string_view text, nlohmann::json* out = nullptr) {
  auto j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !(j.is_object() || j.is_array())) return false;
  if (out != nullptr) *out = std::move(j);
  return true;
}

}  // namespace

std::string_view to_string(OutcomeCategory category) {
  switch (category) {
    case OutcomeCategory::kSuccess: return "Success";
    case OutcomeCategory::kSuccessTruncated: return "Success (trunc.)";
    case OutcomeCategory::kNonJsonSuccess: return "Non-JSON success";
    case OutcomeCategory::kApiError: return "API error";
    case OutcomeCategory::kShellError: return "Shell error";
    case OutcomeCategory::kEmptyResponse: return "Empty response";
    case OutcomeCategory::kCurlError: return "Curl error";
    case OutcomeCategory::kJsonParseError: return "JSON parse error";
    case OutcomeCategory::kPythonError: return "Python error";
    case OutcomeCategory::kTimeout: return "Timeout";
    case OutcomeCategory::kHtmlRedirect: return "HTML redirect";
  }
  return "Non-JSON success";
}

std::optional<OutcomeCategory> parse_outcome_category(std::string_view label) {
  for (auto c : kAllOutcomeCategories) {
    if (to_string(c) == label) return c;
  }
  return std::nullopt;
}

bool is_success(OutcomeCategory category) {
  return category == OutcomeCategory::kSuccess || category == OutcomeCategory::kSuccessTruncated ||
         category == OutcomeCategory::kNonJsonSuccess;
}

OutcomeCategory classify_outcome(std::string_view observation, ExecFlags exec) {
  if (exec.timed_out || contains(observation, "[error] Command timed out after")) return OutcomeCategory::kTimeout;
  const std::string_view body = trim(strip_exit_suffix(observation));
  if (exec.exit_code != 0 && is_shell_diagnostic(body)) return OutcomeCategory::kShellError;
  if (is_curl_error(body)) return OutcomeCategory::kCurlError;
  if (is_meta_refresh(body)) return OutcomeCategory::kHtmlRedirect;

  nlohmann::json parsed;
  const bool is_json = parses_as_json(body, &parsed);
  if ((is_json && parsed.is_object() && parsed.contains("error")) || starts_like_error_envelope(body)) {
    return OutcomeCategory::kApiError;
  }
  if (is_jq_error(body)) return OutcomeCategory::kJsonParseError;
  if (is_python_error(body)) return OutcomeCategory::kPythonError;
  if (exec.exit_code != 0) return OutcomeCategory::kShellError;
  if (body.empty() || body == "[no output]") return OutcomeCategory::kEmptyResponse;

  const std::string_view marker = trim(kTruncationMarker);
  if (body.ends_with(marker)) {
    const std::string_view head = trim(body.substr(0, body.size() - marker.size()));
    if (!head.empty() && (head.front() == '{' || head.front() == '[')) return OutcomeCategory::kSuccessTruncated;
  }
  if (is_json) return OutcomeCategory::kSuccess;
  return OutcomeCategory::kNonJsonSuccess;
}

}  // namespace starshell

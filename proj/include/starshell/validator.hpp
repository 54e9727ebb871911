#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starshell/platform.hpp"

namespace starshell {

enum class CheckKind { kRecordExists, kRecordAbsent, kFieldEquals, kCountEquals, kAnswerMatches, kUrlMatches };
std::string_view to_string(CheckKind kind);
CheckKind parse_check_kind(std::string_view text);

// Declarative assertion over platform state (table + encoded query) or over
// the agent's final message.
struct ValidatorCheck {
  CheckKind kind = CheckKind::kRecordExists;
  std::string table;
  std::string query;
  std::string field;
  std::string expected;
  std::size_t count = 0;
  // answer_matches: compare the whole normalized message instead of
  // searching for the expected text as a token.
  bool exact = false;
  // url_matches: regex searched in each URL of the message. "{sys_id}" is
  // replaced by the sys_id of the first record matching table + query.
  std::string pattern;

  bool is_answer_check() const { return kind == CheckKind::kAnswerMatches || kind == CheckKind::kUrlMatches; }
};

void to_json(Json& j, const ValidatorCheck& c);
void from_json(const Json& j, ValidatorCheck& c);

struct CheckResult {
  bool passed = false;
  std::string detail;
};

CheckResult evaluate_check(const ValidatorCheck& check, const Platform& platform, std::string_view final_message);

// Trim, case-fold, collapse whitespace, drop thousands separators.
std::string normalize_answer(std::string_view text);
bool answer_matches(std::string_view final_message, std::string_view expected, bool exact);
std::vector<std::string> extract_urls(std::string_view text);

}  // namespace starshell

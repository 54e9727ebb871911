#include "starshell/validator.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "starshell/error.hpp"
#include "starshell/query.hpp"

namespace starshell {

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kRecordExists: return "record_exists";
    case CheckKind::kRecordAbsent: return "record_absent";
    case CheckKind::kFieldEquals: return "field_equals";
    case CheckKind::kCountEquals: return "count_equals";
    case CheckKind::kAnswerMatches: return "answer_matches";
    case CheckKind::kUrlMatches: return "url_matches";
  }
  return "record_exists";
}

CheckKind parse_check_kind(std::string_view text) {
  for (auto k : {CheckKind::kRecordExists, CheckKind::kRecordAbsent, CheckKind::kFieldEquals, CheckKind::kCountEquals,
                 CheckKind::kAnswerMatches, CheckKind::kUrlMatches}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorKind::kInvalidTask, "unknown check kind '" + std::string(text) + "'");
}

void to_json(Json& j, const ValidatorCheck& c) {
  j = Json{{"kind", std::string(to_string(c.kind))}};
  if (!c.table.empty()) j["table"] = c.table;
  if (!c.query.empty()) j["query"] = c.query;
  if (!c.field.empty()) j["field"] = c.field;
  if (!c.expected.empty()) j["expected"] = c.expected;
  if (c.kind == CheckKind::kCountEquals) j["count"] = c.count;
  if (c.exact) j["exact"] = true;
  if (!c.pattern.empty()) j["pattern"] = c.pattern;
}

void from_json(const Json& j, ValidatorCheck& c) {
  c.kind = parse_check_kind(j.at("kind").get<std::string>());
  c.table = j.value("table", "");
  c.query = j.value("query", "");
  c.field = j.value("field", "");
  c.expected = j.contains("expected") && !j["expected"].is_string() ? j["expected"].dump() : j.value("expected", "");
  c.count = j.value("count", std::size_t{0});
  c.exact = j.value("exact", false);
  c.pattern = j.value("pattern", "");

  auto need = [&](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kInvalidTask, std::string(to_string(c.kind)) + " check needs " + what);
  };
  switch (c.kind) {
    case CheckKind::kRecordExists:
    case CheckKind::kRecordAbsent: need(!c.table.empty(), "a table"); break;
    case CheckKind::kFieldEquals:
      need(!c.table.empty() && !c.field.empty(), "table and field");
      need(j.contains("expected"), "an expected value");
      break;
    case CheckKind::kCountEquals:
      need(!c.table.empty() && j.contains("count"), "table and count");
      break;
    case CheckKind::kAnswerMatches: need(j.contains("expected"), "an expected answer"); break;
    case CheckKind::kUrlMatches:
      need(!c.pattern.empty(), "a pattern");
      if (c.pattern.find("{sys_id}") != std::string::npos) need(!c.table.empty(), "a table to resolve {sys_id}");
      break;
  }
}

std::string normalize_answer(std::string_view text) {
  std::string folded;
  folded.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) folded += ' ';
    pending_space = false;
    folded += static_cast<char>(std::tolower(c));
  }
  // A comma between a digit and exactly three digits is a thousands separator.
  auto digit = [&folded](std::size_t i) {
    return i < folded.size() && std::isdigit(static_cast<unsigned char>(folded[i])) != 0;
  };
  std::string out;
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (folded[i] == ',' && i > 0 && digit(i - 1) && digit(i + 1) && digit(i + 2) && digit(i + 3) && !digit(i + 4)) {
      continue;
    }
    out += folded[i];
  }
  return out;
}

bool answer_matches(std::string_view final_message, std::string_view expected, bool exact) {
  const std::string haystack = normalize_answer(final_message);
  const std::string needle = normalize_answer(expected);
  if (exact) return haystack == needle;
  if (needle.empty()) return false;
  auto word = [](unsigned char c) { return std::isalnum(c) != 0; };
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !word(haystack[pos - 1]) || !word(needle.front());
    bool right_ok = end == haystack.size() || !word(haystack[end]) || !word(needle.back());
    // "3" must not match inside "3.5".
    if (right_ok && end + 1 < haystack.size() && haystack[end] == '.' &&
        std::isdigit(static_cast<unsigned char>(haystack[end + 1])) && std::isdigit(static_cast<unsigned char>(needle.back()))) {
      right_ok = false;
    }
    if (left_ok && right_ok) return true;
  }
  return false;
}

std::vector<std::string> extract_urls(std::string_view text) {
  std::vector<std::string> urls;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t http = text.find("http", pos);
    if (http == std::string_view::npos) break;
    const std::string_view rest = text.substr(http);
    if (!rest.starts_with("http://") && !rest.starts_with("https://")) {
      pos = http + 4;
      continue;
    }
    std::size_t end = http;
    while (end < text.size()) {
      const unsigned char c = static_cast<unsigned char>(text[end]);
      if (std::isspace(c) || c == '<' || c == '>' || c == '"' || c == '\'' || c == '`' || c == ')' || c == ']') break;
      ++end;
    }
    std::string url(text.substr(http, end - http));
    while (!url.empty() && (url.back() == '.' || url.back() == ',' || url.back() == ';')) url.pop_back();
    urls.push_back(std::move(url));
    pos = end;
  }
  return urls;
}

namespace {

std::string regex_escape(std::string_view s) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

}  // namespace

CheckResult evaluate_check(const ValidatorCheck& check, const Platform& platform, std::string_view final_message) {
  auto select = [&]() { return platform.query(check.table, parse_query(check.query)); };
  try {
    switch (check.kind) {
      case CheckKind::kRecordExists: {
        const auto n = select().size();
        return {n > 0, std::to_string(n) + " matching record(s)"};
      }
      case CheckKind::kRecordAbsent: {
        const auto n = select().size();
        return {n == 0, std::to_string(n) + " matching record(s)"};
      }
      case CheckKind::kFieldEquals: {
        const auto rows = select();
        if (rows.empty()) return {false, "no matching record"};
        for (const auto& r : rows) {
          if (r.get(check.field) != check.expected) {
            return {false, r.sys_id + "." + check.field + " = '" + r.get(check.field) + "', expected '" +
                               check.expected + "'"};
          }
        }
        return {true, std::to_string(rows.size()) + " record(s) with " + check.field + " = '" + check.expected + "'"};
      }
      case CheckKind::kCountEquals: {
        const auto n = select().size();
        return {n == check.count, std::to_string(n) + " matching record(s), expected " + std::to_string(check.count)};
      }
      case CheckKind::kAnswerMatches: {
        const bool ok = answer_matches(final_message, check.expected, check.exact);
        return {ok, ok ? "answer found" : "expected answer '" + check.expected + "' not found in final message"};
      }
      case CheckKind::kUrlMatches: {
        std::string pattern = check.pattern;
        if (pattern.find("{sys_id}") != std::string::npos) {
          const auto rows = select();
          if (rows.empty()) return {false, "no record to resolve {sys_id}"};
          pattern = replace_all(pattern, "{sys_id}", regex_escape(rows.front().sys_id));
        }
        const std::regex re(pattern);
        for (const auto& url : extract_urls(final_message)) {
          if (std::regex_search(url, re)) return {true, "matched " + url};
        }
        return {false, "no URL in the final message matches " + pattern};
      }
    }
  } catch (const std::regex_error& e) {
    throw Error(ErrorKind::kInvalidTask, "bad url pattern '" + check.pattern + "': " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kMalformedToken || e.kind() == ErrorKind::kUnknownTable ||
        e.kind() == ErrorKind::kUnknownField) {
      throw Error(ErrorKind::kInvalidTask, std::string(to_string(check.kind)) + " check: " + e.what());
    }
    throw;
  }
  return {false, "unreachable"};
}

}  // namespace starshell

#include <gtest/gtest.h>

#include <set>

#include "starshell/outcome.hpp"
#include "starshell/sandbox.hpp"

using namespace starshell;

namespace {

struct Row {
  std::string observation;
  ExecFlags flags;
  OutcomeCategory expected;
};

}  // namespace

TEST(Outcome, LabelsRoundTrip) {
  std::set<std::string_view> labels;
  for (auto c : kAllOutcomeCategories) {
    labels.insert(to_string(c));
    EXPECT_EQ(parse_outcome_category(to_string(c)), c);
  }
  EXPECT_EQ(labels.size(), 11u);
  EXPECT_FALSE(parse_outcome_category("success").has_value());
}

TEST(Outcome, TaxonomyExamples) {
  const std::vector<Row> rows = {
      {R"({"result": {"sys_id": "a1b2", "number": "INC001"}})", {}, OutcomeCategory::kSuccess},
      {R"({"result": [{"sys_id": "a1"}, {"sys_id": "b2"})" + std::string(kTruncationMarker), {},
       OutcomeCategory::kSuccessTruncated},
      {"number: INC0000039 state: 6", {}, OutcomeCategory::kNonJsonSuccess},
      {R"({"error": {"detail": "The payload is not valid JSON."}, "status": "failure"})", {},
       OutcomeCategory::kApiError},
      {"/bin/sh: 1: Syntax error: \"}\" unexpected\n[exit code: 2]", {2, false}, OutcomeCategory::kShellError},
      {"[no output]", {}, OutcomeCategory::kEmptyResponse},
      {"curl: (2) no URL specified\n[exit code: 2]", {2, false}, OutcomeCategory::kCurlError},
      {"parse error: Invalid literal at line 1, column 7\n[exit code: 4]", {4, false},
       OutcomeCategory::kJsonParseError},
      {"Traceback (most recent call last):\n  File \"<string>\", line 1\njson.decoder.JSONDecodeError: "
       "Expecting value: line 1 column 1 (char 0)\n[exit code: 1]",
       {1, false}, OutcomeCategory::kPythonError},
      {"[error] Command timed out after 30s.", {124, true}, OutcomeCategory::kTimeout},
      {"<html><head><meta http-equiv=\"refresh\" content=\"0;url=/login.do\"></head></html>", {},
       OutcomeCategory::kHtmlRedirect},
  };
  for (const auto& r : rows) {
    EXPECT_EQ(classify_outcome(r.observation, r.flags), r.expected) << r.observation;
  }
}

TEST(Outcome, PrecedenceRules) {
  // A shell error that mentions curl is still a shell error.
  EXPECT_EQ(classify_outcome("sh: 1: curl: not found\n[exit code: 127]", {127, false}), OutcomeCategory::kShellError);
  // Timeout wins over everything, even valid JSON.
  EXPECT_EQ(classify_outcome(R"({"result":[]})", {0, true}), OutcomeCategory::kTimeout);
  // An error envelope cut off by truncation is still an API error.
  EXPECT_EQ(classify_outcome(R"({"error": {"message": "x")" + std::string(kTruncationMarker)),
            OutcomeCategory::kApiError);
  // Nonzero exit with unrecognized output falls back to shell error.
  EXPECT_EQ(classify_outcome("something odd\n[exit code: 3]", {3, false}), OutcomeCategory::kShellError);
  // Bare scalars are not JSON successes.
  EXPECT_EQ(classify_outcome("42"), OutcomeCategory::kNonJsonSuccess);
  EXPECT_EQ(classify_outcome(""), OutcomeCategory::kEmptyResponse);
  EXPECT_EQ(classify_outcome("  \n"), OutcomeCategory::kEmptyResponse);
  EXPECT_EQ(classify_outcome("[1,2,3]"), OutcomeCategory::kSuccess);
}

TEST(Outcome, DeterministicOnArbitraryInput) {
  std::string s;
  for (int i = 0; i < 2000; ++i) {
    s.push_back(static_cast<char>((i * 131 + 7) % 256));
    const auto a = classify_outcome(s, {i % 3, false});
    EXPECT_EQ(a, classify_outcome(s, {i % 3, false}));
  }
}

#include <gtest/gtest.h>

#include "starshell/error.hpp"
#include "starshell/suite.hpp"
#include "starshell/validator.hpp"

using namespace starshell;

namespace {

const std::string kData = STARSHELL_DATA_DIR;

ValidatorCheck check(const char* json) { return Json::parse(json).get<ValidatorCheck>(); }

void seed_itsm(Platform& p) { p.seed(load_fixture(kData + "/fixtures/itsm.json")); }

}  // namespace

TEST(Answer, Normalization) {
  EXPECT_EQ(normalize_answer("  There are\n 1,250,000   Items "), "there are 1250000 items");
  EXPECT_EQ(normalize_answer("1,25"), "1,25");
  EXPECT_EQ(normalize_answer("a, b"), "a, b");
}

TEST(Answer, TokenBoundaries) {
  EXPECT_TRUE(answer_matches("There are 3 active incidents.", "3", false));
  EXPECT_FALSE(answer_matches("There are 3.5 active incidents.", "3", false));
  EXPECT_FALSE(answer_matches("There are 13 active incidents.", "3", false));
  EXPECT_FALSE(answer_matches("Total: 30", "3", false));
  EXPECT_TRUE(answer_matches("Credit limit is $1,250,000.", "1250000", false));
  EXPECT_TRUE(answer_matches("  Laptop ", "laptop", true));
  EXPECT_FALSE(answer_matches("The Laptop", "laptop", true));
}

TEST(Answer, Urls) {
  const auto urls = extract_urls("See http://a/x?y=1, and https://b/z. Also ftp://c.");
  EXPECT_EQ(urls, (std::vector<std::string>{"http://a/x?y=1", "https://b/z"}));
}

TEST(Checks, StateChecks) {
  Platform p;
  seed_itsm(p);
  EXPECT_TRUE(evaluate_check(check(R"({"kind":"record_exists","table":"incident","query":"number=INC0000004"})"), p, "").passed);
  EXPECT_FALSE(evaluate_check(check(R"({"kind":"record_absent","table":"incident","query":"number=INC0000004"})"), p, "").passed);
  EXPECT_TRUE(evaluate_check(check(R"({"kind":"count_equals","table":"incident","query":"active=true","count":3})"), p, "").passed);
  const auto field = check(R"({"kind":"field_equals","table":"incident","query":"number=INC0000004","field":"state","expected":"6"})");
  const auto r = evaluate_check(field, p, "");
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("3"), std::string::npos) << r.detail;
  p.update("incident", "ef43c6d40a0a0b5700c77f9bf387afe3", {{"state", "6"}});
  EXPECT_TRUE(evaluate_check(field, p, "").passed);
  // A broken check is the task's fault, not the agent's.
  try {
    evaluate_check(check(R"({"kind":"record_exists","table":"incident","query":"ORx=1"})"), p, "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidTask);
  }
  EXPECT_THROW(evaluate_check(check(R"({"kind":"record_exists","table":"nosuch","query":"a=1"})"), p, ""), Error);
}

TEST(Checks, AnswerAndUrlChecks) {
  Platform p;
  seed_itsm(p);
  const auto url = check(
      R"({"kind":"url_matches","table":"incident","query":"number=INC0000005","pattern":"/incident\\.do\\?sys_id={sys_id}$"})");
  EXPECT_TRUE(evaluate_check(url, p, "Here: http://h/incident.do?sys_id=d71f7935c0a8016700802b64c67c11c6").passed);
  EXPECT_FALSE(evaluate_check(url, p, "Here: http://h/incident.do?sys_id=f12ca184735123002728660c4cf6a7ef").passed);
  EXPECT_FALSE(evaluate_check(url, p, "no link").passed);
  const auto ans = check(R"({"kind":"answer_matches","expected":"3"})");
  EXPECT_TRUE(ans.is_answer_check());
  EXPECT_TRUE(evaluate_check(ans, p, "3 incidents are active").passed);
}

TEST(Checks, JsonValidation) {
  EXPECT_THROW(check(R"({"kind":"record_exists"})"), Error);
  EXPECT_THROW(check(R"({"kind":"field_equals","table":"t","query":"a=1"})"), Error);
  EXPECT_THROW(check(R"({"kind":"teleport"})"), Error);
  const auto c = check(R"({"kind":"count_equals","table":"t","query":"a=1","count":2})");
  EXPECT_EQ(Json(c).get<ValidatorCheck>().count, 2u);
}

TEST(Suites, ShippedSuitesLoad) {
  for (const char* name : {"itsm-e2e", "itsm-skills", "itsm-planner", "erp-tools"}) {
    const Suite s = load_suite(kData + "/suites/" + name + ".json");
    EXPECT_FALSE(s.tasks.empty()) << name;
    for (const auto& t : s.tasks) EXPECT_TRUE(s.fixtures.count(t.fixture)) << t.id;
  }
  EXPECT_EQ(load_suite(kData + "/suites/itsm-e2e.json").tasks.size(), 10u);
  try {
    load_suite(kData + "/suites/nope.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSuiteNotFound);
  }
}

TEST(Suites, ValidationRules) {
  const Json base = Json::parse(R"({
    "suite": "s", "profile": "servicenow", "fixtures": {"f": "f.json"},
    "tasks": [{"id": "a", "category": "c", "kind": "read", "goal": "g", "fixture": "f",
               "checks": [{"kind": "record_exists", "table": "t", "query": "x=1"}]}]})");
  EXPECT_THROW(parse_suite(base, "/tmp"), Error);  // read task without answer check
  Json dup = base;
  dup["tasks"][0]["kind"] = "write";
  dup["tasks"].push_back(dup["tasks"][0]);
  EXPECT_THROW(parse_suite(dup, "/tmp"), Error);
  Json fixture = base;
  fixture["tasks"][0]["kind"] = "write";
  fixture["tasks"][0]["fixture"] = "other";
  EXPECT_THROW(parse_suite(fixture, "/tmp"), Error);
  Json ok = base;
  ok["tasks"][0]["kind"] = "write";
  ok["tasks"][0]["script"] = "s.json";
  ok["tasks"][0]["scripts"] = {{"tools/single", "t.json"}};
  const Suite s = parse_suite(ok, "/base");
  EXPECT_EQ(s.fixtures.at("f"), "/base/f.json");
  AgentConfig c;
  EXPECT_EQ(script_for(s.tasks[0], c), std::filesystem::path("/base/s.json"));
  c.paradigm = Paradigm::kToolRegistry;
  EXPECT_EQ(script_for(s.tasks[0], c), std::filesystem::path("/base/t.json"));
}

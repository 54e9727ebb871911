#include <gtest/gtest.h>

#include "../support/query_oracle.hpp"
#include "starshell/error.hpp"
#include "starshell/query.hpp"

using namespace starshell;

namespace {

Table incidents() {
  Table t;
  t.schema.name = "incident";
  t.schema.fields = {{"number", "Number", "string"}, {"priority", "Priority", "integer"},
                     {"active", "Active", "boolean"}, {"short_description", "Short description", "string"}};
  auto rec = [](std::string id, std::string num, std::string prio, std::string active, std::string desc) {
    return TableRecord{std::move(id), 0,
                       {{"number", num}, {"priority", prio}, {"active", active}, {"short_description", desc}}};
  };
  t.records = {rec("c", "INC3", "10", "true", "Email down"), rec("a", "INC1", "2", "true", "VPN flaky"),
               rec("b", "INC2", "2", "false", "email bounce"), rec("d", "INC4", "", "true", "Printer"),
               rec("e", "INC5", "n/a", "false", "Laptop")};
  return t;
}

std::vector<std::string> ids(const std::vector<TableRecord>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.sys_id);
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kIo;
}

}  // namespace

TEST(QueryParse, Conjunctions) {
  const auto plan = parse_query("active=true^priority!=1^short_descriptionLIKEemail^ORDERBYDESCpriority");
  ASSERT_EQ(plan.conjuncts.size(), 3u);
  EXPECT_EQ(plan.conjuncts[0], (Predicate{"active", PredicateOp::kEq, "true"}));
  EXPECT_EQ(plan.conjuncts[1], (Predicate{"priority", PredicateOp::kNeq, "1"}));
  EXPECT_EQ(plan.conjuncts[2], (Predicate{"short_description", PredicateOp::kLike, "email"}));
  ASSERT_TRUE(plan.order);
  EXPECT_EQ(*plan.order, (OrderClause{"priority", SortDirection::kDesc}));
}

TEST(QueryParse, EmptyAndValueWithOperators) {
  EXPECT_TRUE(parse_query("").conjuncts.empty());
  EXPECT_TRUE(parse_query("^^").conjuncts.empty());
  // The earliest operator splits the token; the rest is the value.
  EXPECT_EQ(parse_query("a=b=c").conjuncts[0], (Predicate{"a", PredicateOp::kEq, "b=c"}));
  EXPECT_EQ(parse_query("a!=LIKE").conjuncts[0], (Predicate{"a", PredicateOp::kNeq, "LIKE"}));
  EXPECT_EQ(parse_query("aLIKE=x").conjuncts[0], (Predicate{"a", PredicateOp::kLike, "=x"}));
  EXPECT_EQ(parse_query("a=").conjuncts[0], (Predicate{"a", PredicateOp::kEq, ""}));
}

TEST(QueryParse, Errors) {
  EXPECT_EQ(kind_of([] { parse_query("justaword"); }), ErrorKind::kMalformedToken);
  EXPECT_EQ(kind_of([] { parse_query("=x"); }), ErrorKind::kMalformedToken);
  EXPECT_EQ(kind_of([] { parse_query("active=true^ORpriority=1"); }), ErrorKind::kMalformedToken);
  EXPECT_EQ(kind_of([] { parse_query("active=true^NQpriority=1"); }), ErrorKind::kMalformedToken);
  EXPECT_EQ(kind_of([] { parse_query("ORDERBYa^ORDERBYb"); }), ErrorKind::kMalformedToken);
  EXPECT_EQ(kind_of([] { parse_query("ORDERBY"); }), ErrorKind::kMalformedToken);
}

TEST(QueryParse, RenderRoundTrips) {
  for (const char* q : {"active=true", "a!=1^bLIKEx^ORDERBYc", "ORDERBYDESCpriority", ""}) {
    EXPECT_EQ(render_query(parse_query(q)), q);
  }
}

TEST(QueryEval, FiltersWithAllConjuncts) {
  const auto t = incidents();
  EXPECT_EQ(ids(evaluate_query(parse_query("active=true"), t)), (std::vector<std::string>{"c", "a", "d"}));
  EXPECT_EQ(ids(evaluate_query(parse_query("active=true^short_descriptionLIKEEMAIL"), t)), std::vector<std::string>{"c"});
  EXPECT_EQ(ids(evaluate_query(parse_query("priority!=2"), t)), (std::vector<std::string>{"c", "d", "e"}));
}

TEST(QueryEval, UnknownFilterFieldMatchesNothing) {
  EXPECT_TRUE(evaluate_query(parse_query("nosuch=1"), incidents()).empty());
  EXPECT_TRUE(evaluate_query(parse_query("nosuch!=1"), incidents()).empty());
}

TEST(QueryEval, UnknownOrderFieldIsAnError) {
  EXPECT_EQ(kind_of([] { evaluate_query(parse_query("ORDERBYnosuch"), incidents()); }), ErrorKind::kUnknownField);
}

TEST(QueryEval, NumericOrderingWithTiesBySysId) {
  const auto t = incidents();
  // Non-numbers ("" and "n/a") sort before numbers; 2 < 10 numerically.
  EXPECT_EQ(ids(evaluate_query(parse_query("ORDERBYpriority"), t)), (std::vector<std::string>{"d", "e", "a", "b", "c"}));
  EXPECT_EQ(ids(evaluate_query(parse_query("ORDERBYDESCpriority"), t)),
            (std::vector<std::string>{"c", "a", "b", "e", "d"}));
  // String fields order lexicographically.
  EXPECT_EQ(ids(evaluate_query(parse_query("ORDERBYnumber"), t)), (std::vector<std::string>{"a", "b", "c", "d", "e"}));
}

TEST(QueryEval, ProjectionAndLimit) {
  const auto rows = evaluate_query(parse_query("ORDERBYnumber"), incidents(), {"number", "nosuch", "sys_id"}, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].sys_id, "a");
  EXPECT_EQ(rows[0].fields, (std::map<std::string, std::string>{{"number", "INC1"}}));
}

TEST(QueryEval, MatchesBruteForceOracle) {
  std::mt19937_64 rng(20240101);
  for (int i = 0; i < 300; ++i) {
    const Table t = oracle::random_table(rng, 60);
    const std::string q = oracle::random_query(rng);
    const auto expected = oracle::run(q, t);
    const auto actual = evaluate_query(parse_query(q), t);
    ASSERT_TRUE(oracle::same(expected, actual)) << "query: " << q;
  }
}

#include <gtest/gtest.h>

#include <httplib.h>

#include "starshell/error.hpp"
#include "starshell/platform.hpp"
#include "starshell/platform_service.hpp"

using namespace starshell;

namespace {

const std::string kData = STARSHELL_DATA_DIR;

Snapshot seed_itsm(Platform& p) { return p.seed(load_fixture(kData + "/fixtures/itsm.json")); }

HttpRequest req(std::string method, std::string path, std::map<std::string, std::string> query = {},
                std::string body = "") {
  HttpRequest r;
  r.method = std::move(method);
  r.path = std::move(path);
  r.headers = {{"X-Auth-Token", "starshell-dev-token"}};
  r.query = std::move(query);
  r.body = std::move(body);
  return r;
}

Json body_of(const HttpResponse& r) { return Json::parse(r.body); }

}  // namespace

TEST(Fixture, ShippedFixturesParse) {
  EXPECT_EQ(load_fixture(kData + "/fixtures/itsm.json").tables.size(), 3u);
  EXPECT_EQ(load_fixture(kData + "/fixtures/erp.json").tables.size(), 2u);
}

TEST(Fixture, MalformedFixturesReportLocation) {
  try {
    parse_fixture("{\n  \"tables\": [\n    {\"name\": }\n]}", "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedFixture);
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
  }
  try {
    parse_fixture(R"({"tables":[{"name":"t","fields":[{"name":"a"}],"records":[{"b":1}]}]})", "f.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/tables/0/records/0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_fixture(R"({"tables":[{"name":"t","fields":[],"records":[{"sys_id":"XYZ"}]}]})"), Error);
}

TEST(PlatformState, SeedIsDeterministicAndResetRestores) {
  Platform a;
  Platform b;
  const Snapshot s1 = seed_itsm(a);
  const Snapshot s2 = seed_itsm(b);
  EXPECT_EQ(s1.digest, s2.digest);
  EXPECT_EQ(s1.digest.size(), 64u);
  a.create("incident", {{"short_description", "x"}});
  a.remove("incident", "9d385017c611228701d22104cc95c371");
  EXPECT_NE(a.state_digest(), s1.digest);
  a.reset(s1);
  EXPECT_EQ(a.state_digest(), s1.digest);
  // Creation after reset reuses the same generated ids.
  EXPECT_EQ(a.create("incident", {}).sys_id, b.create("incident", {}).sys_id);
}

TEST(PlatformState, GeneratedIdsAndTimestamps) {
  Platform p;
  seed_itsm(p);
  const auto r = p.create("incident", {{"short_description", "new"}, {"bogus", "ignored"}});
  EXPECT_EQ(r.sys_id.size(), 32u);
  EXPECT_EQ(r.get("bogus"), "");
  EXPECT_TRUE(r.get("sys_created_on").starts_with("2024-01-01 "));
}

TEST(TableApi, ListsWithQueryFieldsAndLimit) {
  Platform p;
  seed_itsm(p);
  auto res = p.handle_request(req("GET", "/api/now/table/incident",
                                  {{"sysparm_query", "active=true^ORDERBYnumber"}, {"sysparm_fields", "number"}}));
  ASSERT_EQ(res.status, 200);
  const Json j = body_of(res);
  ASSERT_EQ(j["result"].size(), 3u);
  EXPECT_EQ(j["result"][0]["number"], "INC0000001");
  EXPECT_TRUE(j["result"][0].contains("sys_id"));
  EXPECT_FALSE(j["result"][0].contains("priority"));
  res = p.handle_request(req("GET", "/api/now/table/incident", {{"sysparm_limit", "2"}}));
  EXPECT_EQ(body_of(res)["result"].size(), 2u);
}

TEST(TableApi, CrudRoundTrip) {
  Platform p;
  seed_itsm(p);
  auto res = p.handle_request(req("POST", "/api/now/table/incident", {}, R"({"short_description":"Fan noise","priority":4})"));
  ASSERT_EQ(res.status, 201);
  const std::string id = body_of(res)["result"]["sys_id"];
  EXPECT_EQ(body_of(res)["result"]["priority"], "4");

  res = p.handle_request(req("PATCH", "/api/now/table/incident/" + id, {}, R"({"state":"6"})"));
  EXPECT_EQ(body_of(res)["result"]["state"], "6");
  res = p.handle_request(req("GET", "/api/now/table/incident/" + id));
  EXPECT_EQ(body_of(res)["result"]["short_description"], "Fan noise");
  res = p.handle_request(req("DELETE", "/api/now/table/incident/" + id));
  EXPECT_EQ(res.status, 200);
  res = p.handle_request(req("GET", "/api/now/table/incident/" + id));
  EXPECT_EQ(res.status, 404);
  EXPECT_EQ(body_of(res)["status"], "failure");
}

TEST(TableApi, ErrorEnvelopes) {
  Platform p;
  seed_itsm(p);
  auto res = p.handle_request(req("POST", "/api/now/table/incident", {}, "{short_description: oops}"));
  EXPECT_EQ(res.status, 400);
  EXPECT_EQ(body_of(res)["error"]["detail"], "The payload is not valid JSON.");
  EXPECT_EQ(body_of(res)["status"], "failure");

  res = p.handle_request(req("PUT", "/api/now/table/incident/9d385017c611228701d22104cc95c371", {}, "{}"));
  EXPECT_EQ(res.status, 405);
  res = p.handle_request(req("GET", "/api/now/table/nosuch"));
  EXPECT_EQ(res.status, 404);
  EXPECT_TRUE(body_of(res).contains("error"));
  res = p.handle_request(req("GET", "/api/now/table/incident", {{"sysparm_query", "active=true^ORpriority=1"}}));
  EXPECT_EQ(res.status, 400);
  res = p.handle_request(req("GET", "/api/now/table/incident", {{"sysparm_query", "ORDERBYnosuch"}}));
  EXPECT_EQ(res.status, 400);
}

TEST(TableApi, MissingAuthGetsLoginRedirect) {
  Platform p;
  seed_itsm(p);
  HttpRequest r = req("GET", "/api/now/table/incident");
  r.headers.clear();
  const auto res = p.handle_request(r);
  EXPECT_EQ(res.status, 200);
  EXPECT_EQ(res.content_type, "text/html");
  EXPECT_NE(res.body.find("<meta http-equiv=\"refresh\""), std::string::npos);
  r.headers = {{"X-Auth-Token", "wrong"}};
  EXPECT_EQ(p.handle_request(r).content_type, "text/html");
}

TEST(ResourceApi, SchemaAndFilters) {
  Platform p;
  p.seed(load_fixture(kData + "/fixtures/erp.json"));
  auto res = p.handle_request(req("GET", "/api/resource/DocType"));
  EXPECT_EQ(body_of(res)["result"].size(), 2u);
  res = p.handle_request(req("GET", "/api/resource/DocType/Item"));
  EXPECT_EQ(body_of(res)["result"]["fields"][0]["fieldname"], "item_code");
  res = p.handle_request(req("GET", "/api/resource/Item",
                             {{"filters", R"([["item_group","=","Products"],["item_name","like","o"]])"},
                              {"fields", R"(["item_code"])"},
                              {"order_by", "item_code desc"}}));
  const Json rows = body_of(res)["result"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["item_code"], "SKU004");
  EXPECT_EQ(rows[1]["item_code"], "SKU002");
  res = p.handle_request(req("PUT", "/api/resource/Item/7c2e9a1b3d5f4b6d8e0a2c4e6a8b0d12", {}, R"({"standard_rate":5})"));
  EXPECT_EQ(body_of(res)["result"]["standard_rate"], "5");
  res = p.handle_request(req("GET", "/api/resource/Nope"));
  EXPECT_EQ(res.status, 404);
}

TEST(Service, ServesOverLoopback) {
  Platform p;
  const Snapshot snap = p.seed(load_fixture(kData + "/fixtures/itsm.json"));
  PlatformService service(p);
  httplib::Client client(service.base_url());
  auto res = client.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body)["result"]["digest"], snap.digest);
  res = client.Get("/api/now/table/incident?sysparm_query=number%3DINC0000005",
                   httplib::Headers{{"X-Auth-Token", "starshell-dev-token"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body)["result"][0]["sys_id"], "d71f7935c0a8016700802b64c67c11c6");
  res = client.Post("/api/now/table/incident", httplib::Headers{{"X-Auth-Token", "starshell-dev-token"}},
                    R"({"short_description":"via http"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  EXPECT_EQ(p.record_count("incident"), 9u);
}

TEST(Service, PortInUse) {
  Platform p;
  PlatformService first(p);
  try {
    PlatformService second(p, first.port());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPortInUse);
  }
}

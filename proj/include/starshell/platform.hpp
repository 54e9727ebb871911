#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "starshell/query.hpp"

namespace starshell {

using Json = nlohmann::json;

struct Fixture {
  std::string name;
  std::vector<Table> tables;
};

// Fixture files are JSON: {"name", "tables": [{"name", "label", "fields":
// [{"name","label","type"}], "records": [{field: value, ...}]}]}.
// Errors carry a line:column or a JSON-pointer style location.
Fixture parse_fixture(std::string_view text, std::string_view source = "<fixture>");
Fixture load_fixture(const std::string& path);

struct Snapshot {
  std::string fixture_name;
  std::string state;   // canonical serialization
  std::string digest;  // hex SHA-256 of the table state
};

struct AuthConfig {
  std::string header_name = "X-Auth-Token";
  std::string header_value = "starshell-dev-token";
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  std::map<std::string, std::string> query;
  std::string body;

  std::optional<std::string> header(std::string_view name) const;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Builders for the three response shapes the service ever emits.
HttpResponse result_envelope(int status, Json result);
HttpResponse error_envelope(int status, std::string message, std::string detail);
HttpResponse auth_redirect_page();

inline constexpr std::string_view kInvalidJsonDetail = "The payload is not valid JSON.";

std::string sha256_hex(std::string_view data);
std::string render_created_on(std::int64_t ordinal);

// In-memory enterprise platform. All public methods are serialized on one
// mutex, which also gives reset() the exclusive access it needs.
class Platform {
 public:
  explicit Platform(AuthConfig auth = {});

  Snapshot seed(const Fixture& fixture);
  void reset(const Snapshot& snapshot);
  Snapshot snapshot() const;
  std::string state_digest() const;
  std::string fixture_name() const;

  HttpResponse handle_request(const HttpRequest& request);

  // Direct access for validators and tests.
  std::vector<TableRecord> query(std::string_view table, const QueryPlan& plan,
                                 const std::vector<std::string>& fields = {},
                                 std::optional<std::size_t> limit = std::nullopt) const;
  std::optional<TableRecord> get(std::string_view table, std::string_view sys_id) const;
  TableRecord create(std::string_view table, const Json& values);
  std::optional<TableRecord> update(std::string_view table, std::string_view sys_id, const Json& values);
  bool remove(std::string_view table, std::string_view sys_id);
  std::vector<std::string> table_names() const;
  TableSchema schema(std::string_view table) const;
  std::size_t record_count(std::string_view table) const;

  const AuthConfig& auth() const { return auth_; }

 private:
  const Table& table_locked(std::string_view name) const;
  Table& table_locked(std::string_view name);
  const Table* resolve_doctype_locked(std::string_view doctype) const;
  TableRecord create_locked(Table& table, const Json& values);
  std::string new_sys_id_locked();
  std::string state_json_locked(bool with_name) const;
  void load_state_locked(const Json& state);

  HttpResponse handle_table_api(const HttpRequest& request, std::string_view rest);
  HttpResponse handle_resource_api(const HttpRequest& request, std::string_view rest);
  HttpResponse list_records(const Table& table, const QueryPlan& plan,
                            const std::vector<std::string>& fields,
                            std::optional<std::size_t> limit, std::size_t offset) const;
  HttpResponse write_record(const HttpRequest& request, Table& table, std::optional<std::string> sys_id);

  AuthConfig auth_;
  mutable std::mutex mutex_;
  std::map<std::string, Table, std::less<>> tables_;
  std::int64_t next_ordinal_ = 1;
  std::string fixture_name_;
};

Json record_to_json(const TableRecord& record);

}  // namespace starshell

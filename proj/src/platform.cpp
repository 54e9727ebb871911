#include "starshell/platform.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "starshell/error.hpp"

namespace starshell {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return out;
}

bool is_sys_id(std::string_view s) {
  return s.size() == 32 && std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c) || (c >= 'a' && c <= 'f');
         });
}

std::string value_to_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Byte offset -> "line:column" (1-based).
std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fixture_error(std::string_view source, const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kMalformedFixture, std::string(source) + ":" + where + ": " + what);
}

std::vector<std::string> split_csv(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::optional<std::size_t> parse_count(const std::map<std::string, std::string>& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  std::size_t pos = 0;
  const long long v = std::stoll(it->second, &pos);
  if (pos != it->second.size() || v < 0) throw std::invalid_argument(key);
  return static_cast<std::size_t>(v);
}

HttpResponse not_found_record() {
  return error_envelope(404, "No Record found", "Record doesn't exist or ACL restricts the record retrieval");
}

HttpResponse invalid_table(std::string_view name) {
  return error_envelope(404, "Invalid table " + std::string(name), "");
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::string> HttpRequest::header(std::string_view name) const {
  const std::string want = lower(name);
  for (const auto& [k, v] : headers) {
    if (lower(k) == want) return v;
  }
  return std::nullopt;
}

HttpResponse result_envelope(int status, Json result) {
  return {status, "application/json", Json{{"result", std::move(result)}}.dump()};
}

HttpResponse error_envelope(int status, std::string message, std::string detail) {
  Json body = {{"error", {{"message", std::move(message)}, {"detail", std::move(detail)}}}, {"status", "failure"}};
  return {status, "application/json", body.dump()};
}

HttpResponse auth_redirect_page() {
  return {200, "text/html",
          "<html><head><meta http-equiv=\"refresh\" content=\"0;url=/login.do\">"
          "<title>Login</title></head><body>Redirecting to login...</body></html>"};
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "sha256 failed");
  }
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kDigits[md[i] >> 4];
    out += kDigits[md[i] & 0xF];
  }
  return out;
}

// A fixed epoch plus one second per creation keeps timestamps sortable
// and replayable.
std::string render_created_on(std::int64_t ordinal) {
  const std::time_t t = 1'704'067'200 + ordinal;  // 2024-01-01 00:00:00 UTC
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%d %H:%M:%S", &tm);
  return buf.data();
}

Json record_to_json(const TableRecord& record) {
  Json j = Json::object();
  for (const auto& [k, v] : record.fields) j[k] = v;
  j["sys_id"] = record.sys_id;
  return j;
}

// ---------------------------------------------------------------------------

Fixture parse_fixture(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fixture_error(source, locate(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) fixture_error(source, "1:1", "fixture must be a JSON object");
  Fixture fixture;
  fixture.name = doc.value("name", std::string(source));
  if (!doc.contains("tables") || !doc["tables"].is_array()) fixture_error(source, "/tables", "missing tables array");
  std::set<std::string> table_names;
  std::set<std::string> sys_ids;
  for (std::size_t ti = 0; ti < doc["tables"].size(); ++ti) {
    const Json& t = doc["tables"][ti];
    const std::string where = "/tables/" + std::to_string(ti);
    if (!t.is_object() || !t.contains("name") || !t["name"].is_string()) fixture_error(source, where, "table needs a name");
    Table table;
    table.schema.name = t["name"].get<std::string>();
    table.schema.label = t.value("label", table.schema.name);
    if (!table_names.insert(table.schema.name).second) fixture_error(source, where, "duplicate table " + table.schema.name);
    if (!t.contains("fields") || !t["fields"].is_array()) fixture_error(source, where + "/fields", "missing field list");
    for (std::size_t fi = 0; fi < t["fields"].size(); ++fi) {
      const Json& f = t["fields"][fi];
      if (!f.is_object() || !f.contains("name") || !f["name"].is_string()) {
        fixture_error(source, where + "/fields/" + std::to_string(fi), "field needs a name");
      }
      FieldDef def{f["name"].get<std::string>(), f.value("label", f["name"].get<std::string>()), f.value("type", "string")};
      if (def.name == "sys_id" || def.name == "sys_created_on") {
        fixture_error(source, where + "/fields/" + std::to_string(fi), def.name + " is implicit");
      }
      table.schema.fields.push_back(std::move(def));
    }
    const Json records = t.value("records", Json::array());
    if (!records.is_array()) fixture_error(source, where + "/records", "records must be an array");
    for (std::size_t ri = 0; ri < records.size(); ++ri) {
      const Json& r = records[ri];
      const std::string rwhere = where + "/records/" + std::to_string(ri);
      if (!r.is_object()) fixture_error(source, rwhere, "record must be an object");
      TableRecord rec;
      for (const auto& [k, v] : r.items()) {
        if (k == "sys_id") {
          rec.sys_id = value_to_string(v);
          if (!is_sys_id(rec.sys_id)) fixture_error(source, rwhere, "sys_id must be 32 lowercase hex digits");
          if (!sys_ids.insert(rec.sys_id).second) fixture_error(source, rwhere, "duplicate sys_id");
          continue;
        }
        if (k == "sys_created_on") continue;
        if (table.schema.find(k) == nullptr) fixture_error(source, rwhere, "field '" + k + "' not in schema");
        rec.fields[k] = value_to_string(v);
      }
      table.records.push_back(std::move(rec));
    }
    fixture.tables.push_back(std::move(table));
  }
  return fixture;
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMalformedFixture, "cannot read fixture " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str(), path);
}

// ---------------------------------------------------------------------------

Platform::Platform(AuthConfig auth) : auth_(std::move(auth)) {}

std::string Platform::new_sys_id_locked() {
  for (std::uint64_t salt = 0;; ++salt) {
    const auto n = static_cast<std::uint64_t>(next_ordinal_);
    const std::string id = hex64(splitmix64(n + (salt << 48))) + hex64(splitmix64(~n));
    bool taken = false;
    for (const auto& [_, table] : tables_) {
      taken = taken || std::any_of(table.records.begin(), table.records.end(),
                                   [&](const TableRecord& r) { return r.sys_id == id; });
    }
    if (!taken) return id;
  }
}

Snapshot Platform::seed(const Fixture& fixture) {
  {
    std::lock_guard lock(mutex_);
    tables_.clear();
    next_ordinal_ = 1;
    fixture_name_ = fixture.name;
    for (const auto& t : fixture.tables) tables_[t.schema.name] = Table{t.schema, {}};
    for (const auto& t : fixture.tables) {
      Table& dest = tables_[t.schema.name];
      for (const auto& r : t.records) {
        TableRecord rec = r;
        if (rec.sys_id.empty()) rec.sys_id = new_sys_id_locked();
        rec.ordinal = next_ordinal_++;
        rec.fields["sys_created_on"] = render_created_on(rec.ordinal);
        dest.records.push_back(std::move(rec));
      }
    }
  }
  return snapshot();
}

std::string Platform::state_json_locked(bool with_name) const {
  Json tables = Json::array();
  for (const auto& [name, table] : tables_) {
    Json fields = Json::array();
    for (const auto& f : table.schema.fields) fields.push_back({{"name", f.name}, {"label", f.label}, {"type", f.type_tag}});
    Json records = Json::array();
    for (const auto& r : table.records) {
      records.push_back({{"sys_id", r.sys_id}, {"ordinal", r.ordinal}, {"fields", r.fields}});
    }
    tables.push_back({{"name", name}, {"label", table.schema.label}, {"fields", fields}, {"records", records}});
  }
  Json state = {{"next_ordinal", next_ordinal_}, {"tables", tables}};
  if (with_name) state["fixture"] = fixture_name_;
  return state.dump();
}

void Platform::load_state_locked(const Json& state) {
  tables_.clear();
  fixture_name_ = state.value("fixture", "");
  next_ordinal_ = state.at("next_ordinal").get<std::int64_t>();
  for (const auto& t : state.at("tables")) {
    Table table;
    table.schema.name = t.at("name").get<std::string>();
    table.schema.label = t.at("label").get<std::string>();
    for (const auto& f : t.at("fields")) {
      table.schema.fields.push_back({f.at("name").get<std::string>(), f.at("label").get<std::string>(),
                                     f.at("type").get<std::string>()});
    }
    for (const auto& r : t.at("records")) {
      table.records.push_back({r.at("sys_id").get<std::string>(), r.at("ordinal").get<std::int64_t>(),
                               r.at("fields").get<std::map<std::string, std::string>>()});
    }
    tables_[table.schema.name] = std::move(table);
  }
}

Snapshot Platform::snapshot() const {
  std::lock_guard lock(mutex_);
  return {fixture_name_, state_json_locked(true), sha256_hex(state_json_locked(false))};
}

void Platform::reset(const Snapshot& snapshot) {
  std::lock_guard lock(mutex_);
  load_state_locked(Json::parse(snapshot.state));
}

std::string Platform::state_digest() const {
  std::lock_guard lock(mutex_);
  return sha256_hex(state_json_locked(false));
}

std::string Platform::fixture_name() const {
  std::lock_guard lock(mutex_);
  return fixture_name_;
}

const Table& Platform::table_locked(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorKind::kUnknownTable, "unknown table '" + std::string(name) + "'");
  return it->second;
}

Table& Platform::table_locked(std::string_view name) {
  return const_cast<Table&>(std::as_const(*this).table_locked(name));
}

const Table* Platform::resolve_doctype_locked(std::string_view doctype) const {
  std::string snake = lower(doctype);
  std::replace(snake.begin(), snake.end(), ' ', '_');
  std::replace(snake.begin(), snake.end(), '-', '_');
  for (const auto& [name, table] : tables_) {
    if (name == doctype || table.schema.label == doctype || name == snake) return &table;
  }
  return nullptr;
}

std::vector<TableRecord> Platform::query(std::string_view table, const QueryPlan& plan,
                                         const std::vector<std::string>& fields,
                                         std::optional<std::size_t> limit) const {
  std::lock_guard lock(mutex_);
  return evaluate_query(plan, table_locked(table), fields, limit);
}

std::optional<TableRecord> Platform::get(std::string_view table, std::string_view sys_id) const {
  std::lock_guard lock(mutex_);
  for (const auto& r : table_locked(table).records) {
    if (r.sys_id == sys_id) return r;
  }
  return std::nullopt;
}

TableRecord Platform::create_locked(Table& table, const Json& values) {
  TableRecord rec;
  rec.sys_id = new_sys_id_locked();
  rec.ordinal = next_ordinal_++;
  for (const auto& [k, v] : values.items()) {
    // Unknown fields are ignored, as the real Table API does.
    if (table.schema.find(k) != nullptr) rec.fields[k] = value_to_string(v);
  }
  rec.fields["sys_created_on"] = render_created_on(rec.ordinal);
  table.records.push_back(rec);
  return rec;
}

TableRecord Platform::create(std::string_view table, const Json& values) {
  std::lock_guard lock(mutex_);
  return create_locked(table_locked(table), values);
}

std::optional<TableRecord> Platform::update(std::string_view table, std::string_view sys_id, const Json& values) {
  std::lock_guard lock(mutex_);
  Table& t = table_locked(table);
  for (auto& r : t.records) {
    if (r.sys_id != sys_id) continue;
    for (const auto& [k, v] : values.items()) {
      if (t.schema.find(k) != nullptr) r.fields[k] = value_to_string(v);
    }
    return r;
  }
  return std::nullopt;
}

bool Platform::remove(std::string_view table, std::string_view sys_id) {
  std::lock_guard lock(mutex_);
  auto& records = table_locked(table).records;
  auto it = std::find_if(records.begin(), records.end(), [&](const TableRecord& r) { return r.sys_id == sys_id; });
  if (it == records.end()) return false;
  records.erase(it);
  return true;
}

std::vector<std::string> Platform::table_names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> names;
  for (const auto& [name, _] : tables_) names.push_back(name);
  return names;
}

TableSchema Platform::schema(std::string_view table) const {
  std::lock_guard lock(mutex_);
  return table_locked(table).schema;
}

std::size_t Platform::record_count(std::string_view table) const {
  std::lock_guard lock(mutex_);
  return table_locked(table).records.size();
}

// ---------------------------------------------------------------------------
// HTTP surface

HttpResponse Platform::handle_request(const HttpRequest& request) {
  std::string path = request.path;
  while (path.size() > 1 && path.back() == '/') path.pop_back();

  if (path == "/health" && request.method == "GET") {
    std::lock_guard lock(mutex_);
    return result_envelope(200, {{"status", "ok"}, {"fixture", fixture_name_}, {"digest", sha256_hex(state_json_locked(false))}});
  }
  const auto token = request.header(auth_.header_name);
  if (!token || *token != auth_.header_value) return auth_redirect_page();

  constexpr std::string_view kTablePrefix = "/api/now/table/";
  constexpr std::string_view kResourcePrefix = "/api/resource/";
  std::lock_guard lock(mutex_);
  if (path.starts_with(kTablePrefix)) return handle_table_api(request, std::string_view(path).substr(kTablePrefix.size()));
  if (path.starts_with(kResourcePrefix)) return handle_resource_api(request, std::string_view(path).substr(kResourcePrefix.size()));
  return error_envelope(400, "Requested URI does not represent any resource", path);
}

HttpResponse Platform::list_records(const Table& table, const QueryPlan& plan,
                                    const std::vector<std::string>& fields,
                                    std::optional<std::size_t> limit, std::size_t offset) const {
  std::vector<TableRecord> rows;
  try {
    rows = evaluate_query(plan, table, fields);
  } catch (const Error& e) {
    return error_envelope(400, "Invalid query", e.what());
  }
  Json result = Json::array();
  for (std::size_t i = offset; i < rows.size(); ++i) {
    if (limit && result.size() >= *limit) break;
    result.push_back(record_to_json(rows[i]));
  }
  return result_envelope(200, std::move(result));
}

HttpResponse Platform::write_record(const HttpRequest& request, Table& table, std::optional<std::string> sys_id) {
  Json body;
  try {
    body = Json::parse(request.body);
  } catch (const Json::exception&) {
    return error_envelope(400, "Exception while reading request", std::string(kInvalidJsonDetail));
  }
  // ERPNext clients wrap the document in {"data": {...}}.
  if (body.is_object() && body.size() == 1 && body.contains("data") && body["data"].is_object()) body = body["data"];
  if (!body.is_object()) return error_envelope(400, "Exception while reading request", std::string(kInvalidJsonDetail));
  if (!sys_id) return result_envelope(201, record_to_json(create_locked(table, body)));
  for (auto& r : table.records) {
    if (r.sys_id != *sys_id) continue;
    for (const auto& [k, v] : body.items()) {
      if (table.schema.find(k) != nullptr) r.fields[k] = value_to_string(v);
    }
    return result_envelope(200, record_to_json(r));
  }
  return not_found_record();
}

HttpResponse Platform::handle_table_api(const HttpRequest& request, std::string_view rest) {
  const auto slash = rest.find('/');
  const std::string table_name(rest.substr(0, slash));
  const std::optional<std::string> sys_id =
      slash == std::string_view::npos ? std::nullopt : std::optional<std::string>(rest.substr(slash + 1));
  auto it = tables_.find(table_name);
  if (it == tables_.end()) return invalid_table(table_name);
  Table& table = it->second;
  const std::string& method = request.method;

  if (!sys_id) {
    if (method == "GET") {
      QueryPlan plan;
      std::optional<std::size_t> limit;
      std::size_t offset = 0;
      try {
        if (auto q = request.query.find("sysparm_query"); q != request.query.end()) plan = parse_query(q->second);
        limit = parse_count(request.query, "sysparm_limit");
        offset = parse_count(request.query, "sysparm_offset").value_or(0);
      } catch (const Error& e) {
        return error_envelope(400, "Invalid query", e.what());
      } catch (const std::exception&) {
        return error_envelope(400, "Invalid parameter", "sysparm_limit and sysparm_offset must be non-negative integers");
      }
      std::vector<std::string> fields;
      if (auto f = request.query.find("sysparm_fields"); f != request.query.end()) fields = split_csv(f->second);
      return list_records(table, plan, fields, limit, offset);
    }
    if (method == "POST") return write_record(request, table, std::nullopt);
    return error_envelope(405, "Method not Supported", "Method " + method + " is not supported for this resource");
  }

  if (method == "GET") {
    std::vector<std::string> fields;
    if (auto f = request.query.find("sysparm_fields"); f != request.query.end()) fields = split_csv(f->second);
    for (const auto& r : table.records) {
      if (r.sys_id != *sys_id) continue;
      Table single{table.schema, {r}};
      return result_envelope(200, record_to_json(evaluate_query({}, single, fields).front()));
    }
    return not_found_record();
  }
  if (method == "PATCH") return write_record(request, table, sys_id);
  if (method == "DELETE") {
    auto& records = table.records;
    auto pos = std::find_if(records.begin(), records.end(), [&](const TableRecord& r) { return r.sys_id == *sys_id; });
    if (pos == records.end()) return not_found_record();
    records.erase(pos);
    return result_envelope(200, {{"sys_id", *sys_id}, {"deleted", true}});
  }
  return error_envelope(405, "Method not Supported", "Method " + method + " is not supported for this resource");
}

namespace {

// ERPNext-style filters: {"field": "value"} or [["field", "op", "value"], ...]
// (a leading doctype element is tolerated).
QueryPlan plan_from_filters(const std::string& text) {
  QueryPlan plan;
  if (text.empty()) return plan;
  const Json filters = Json::parse(text);
  auto add = [&plan](const std::string& field, std::string op, const Json& value) {
    op = lower(op);
    std::string v = value_to_string(value);
    if (op == "=") {
      plan.conjuncts.push_back({field, PredicateOp::kEq, v});
    } else if (op == "!=") {
      plan.conjuncts.push_back({field, PredicateOp::kNeq, v});
    } else if (op == "like") {
      v.erase(std::remove(v.begin(), v.end(), '%'), v.end());
      plan.conjuncts.push_back({field, PredicateOp::kLike, v});
    } else {
      throw Error(ErrorKind::kMalformedToken, "unsupported filter operator '" + op + "'");
    }
  };
  if (filters.is_object()) {
    for (const auto& [k, v] : filters.items()) add(k, "=", v);
  } else if (filters.is_array()) {
    for (const auto& f : filters) {
      if (!f.is_array() || (f.size() != 3 && f.size() != 4)) throw Error(ErrorKind::kMalformedToken, "filter must be [field, op, value]");
      const std::size_t base = f.size() - 3;
      add(f[base].get<std::string>(), f[base + 1].get<std::string>(), f[base + 2]);
    }
  } else {
    throw Error(ErrorKind::kMalformedToken, "filters must be an object or a list");
  }
  return plan;
}

}  // namespace

HttpResponse Platform::handle_resource_api(const HttpRequest& request, std::string_view rest) {
  const auto slash = rest.find('/');
  const std::string doctype(rest.substr(0, slash));
  const std::optional<std::string> name =
      slash == std::string_view::npos ? std::nullopt : std::optional<std::string>(rest.substr(slash + 1));

  if (doctype == "DocType" && request.method == "GET") {
    if (!name) {
      Json list = Json::array();
      for (const auto& [tname, t] : tables_) list.push_back({{"name", t.schema.label}, {"table", tname}});
      return result_envelope(200, std::move(list));
    }
    const Table* t = resolve_doctype_locked(*name);
    if (t == nullptr) return error_envelope(404, "DocType " + *name + " not found", "");
    Json fields = Json::array();
    for (const auto& f : t->schema.fields) {
      fields.push_back({{"fieldname", f.name}, {"label", f.label}, {"fieldtype", f.type_tag}});
    }
    return result_envelope(200, {{"name", t->schema.label}, {"table", t->schema.name}, {"fields", fields}});
  }

  const Table* resolved = resolve_doctype_locked(doctype);
  if (resolved == nullptr) return error_envelope(404, "DocType " + doctype + " not found", "");
  Table& table = tables_.find(resolved->schema.name)->second;
  const std::string& method = request.method;

  if (!name) {
    if (method == "GET") {
      QueryPlan plan;
      std::vector<std::string> fields;
      std::optional<std::size_t> limit;
      try {
        if (auto f = request.query.find("filters"); f != request.query.end()) plan = plan_from_filters(f->second);
        if (auto f = request.query.find("fields"); f != request.query.end()) {
          for (const auto& v : Json::parse(f->second)) {
            if (v.get<std::string>() != "*") fields.push_back(v.get<std::string>());
          }
        }
        if (auto o = request.query.find("order_by"); o != request.query.end() && !o->second.empty()) {
          std::istringstream words(o->second);
          std::string field, dir;
          words >> field >> dir;
          plan.order = OrderClause{field, lower(dir) == "desc" ? SortDirection::kDesc : SortDirection::kAsc};
        }
        limit = parse_count(request.query, "limit_page_length");
      } catch (const std::exception& e) {
        return error_envelope(400, "Invalid filters", e.what());
      }
      return list_records(table, plan, fields, limit, 0);
    }
    if (method == "POST") return write_record(request, table, std::nullopt);
    return error_envelope(405, "Method not Supported", "Method " + method + " is not supported for this resource");
  }
  if (method == "GET") {
    for (const auto& r : table.records) {
      if (r.sys_id == *name) return result_envelope(200, record_to_json(r));
    }
    return not_found_record();
  }
  if (method == "PUT" || method == "PATCH") return write_record(request, table, name);
  if (method == "DELETE") {
    auto& records = table.records;
    auto pos = std::find_if(records.begin(), records.end(), [&](const TableRecord& r) { return r.sys_id == *name; });
    if (pos == records.end()) return not_found_record();
    records.erase(pos);
    return result_envelope(200, {{"sys_id", *name}, {"deleted", true}});
  }
  return error_envelope(405, "Method not Supported", "Method " + method + " is not supported for this resource");
}

}  // namespace starshell

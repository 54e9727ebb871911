#include "starshell/query.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>

#include "starshell/error.hpp"

namespace starshell {
namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void malformed(std::string_view token, std::string_view why) {
  throw Error(ErrorKind::kMalformedToken,
              "malformed query token '" + std::string(token) + "': " + std::string(why));
}

Predicate parse_predicate(std::string_view token) {
  struct Candidate {
    std::size_t pos;
    std::size_t len;
    PredicateOp op;
  };
  std::vector<Candidate> found;
  if (auto p = token.find("!="); p != std::string_view::npos) found.push_back({p, 2, PredicateOp::kNeq});
  if (auto p = token.find("LIKE"); p != std::string_view::npos) found.push_back({p, 4, PredicateOp::kLike});
  if (auto p = token.find('='); p != std::string_view::npos) found.push_back({p, 1, PredicateOp::kEq});
  if (found.empty()) malformed(token, "no recognizable operator (=, !=, LIKE)");
  const auto best = *std::min_element(found.begin(), found.end(),
                                      [](const Candidate& a, const Candidate& b) { return a.pos < b.pos; });
  Predicate p;
  p.field = std::string(token.substr(0, best.pos));
  p.op = best.op;
  p.value = std::string(token.substr(best.pos + best.len));
  if (!is_identifier(p.field)) malformed(token, "field name must be an identifier");
  return p;
}

// Values that do not parse fully as numbers sort before all numbers.
std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

int compare_values(const std::string& a, const std::string& b, bool numeric) {
  if (numeric) {
    const auto na = as_number(a);
    const auto nb = as_number(b);
    if (na && nb) return *na < *nb ? -1 : (*na > *nb ? 1 : 0);
    if (na) return 1;
    if (nb) return -1;
  }
  const int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

QueryPlan parse_query(std::string_view query) {
  QueryPlan plan;
  std::size_t pos = 0;
  while (pos <= query.size()) {
    const auto caret = query.find('^', pos);
    const std::string_view token =
        query.substr(pos, caret == std::string_view::npos ? std::string_view::npos : caret - pos);
    pos = caret == std::string_view::npos ? query.size() + 1 : caret + 1;
    if (token.empty()) continue;

    std::optional<OrderClause> order;
    if (token.starts_with("ORDERBYDESC")) {
      order = OrderClause{std::string(token.substr(11)), SortDirection::kDesc};
    } else if (token.starts_with("ORDERBY")) {
      order = OrderClause{std::string(token.substr(7)), SortDirection::kAsc};
    }
    if (order) {
      if (!is_identifier(order->field)) malformed(token, "ORDERBY needs a field name");
      if (plan.order) malformed(token, "only one ORDERBY clause is supported");
      plan.order = std::move(order);
      continue;
    }
    if (token.starts_with("OR") || token.starts_with("NQ")) {
      malformed(token, "OR / NQ disjunctions are not supported; use '^'-joined conjunctions");
    }
    plan.conjuncts.push_back(parse_predicate(token));
  }
  return plan;
}

std::string render_query(const QueryPlan& plan) {
  std::string out;
  auto append = [&out](const std::string& token) {
    if (!out.empty()) out += '^';
    out += token;
  };
  for (const auto& p : plan.conjuncts) {
    switch (p.op) {
      case PredicateOp::kEq: append(p.field + "=" + p.value); break;
      case PredicateOp::kNeq: append(p.field + "!=" + p.value); break;
      case PredicateOp::kLike: append(p.field + "LIKE" + p.value); break;
    }
  }
  if (plan.order) {
    append((plan.order->direction == SortDirection::kDesc ? "ORDERBYDESC" : "ORDERBY") + plan.order->field);
  }
  return out;
}

// ---------------------------------------------------------------------------

FieldType parse_field_type(std::string_view tag) {
  const std::string t = lower(tag);
  if (t == "integer" || t == "int" || t == "decimal" || t == "float" || t == "number" ||
      t == "currency" || t == "numeric") {
    return FieldType::kNumeric;
  }
  if (t == "boolean" || t == "bool") return FieldType::kBoolean;
  if (t == "datetime" || t == "glide_date_time" || t == "date") return FieldType::kDateTime;
  if (t == "reference" || t == "link") return FieldType::kReference;
  return FieldType::kString;
}

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::kString: return "string";
    case FieldType::kNumeric: return "numeric";
    case FieldType::kBoolean: return "boolean";
    case FieldType::kDateTime: return "datetime";
    case FieldType::kReference: return "reference";
  }
  return "string";
}

const FieldDef* TableSchema::find(std::string_view field) const {
  auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldDef& f) { return f.name == field; });
  return it == fields.end() ? nullptr : &*it;
}

bool TableSchema::has_field(std::string_view field) const {
  return field == "sys_id" || field == "sys_created_on" || find(field) != nullptr;
}

std::string TableRecord::get(std::string_view field) const {
  if (field == "sys_id") return sys_id;
  auto it = fields.find(std::string(field));
  return it == fields.end() ? std::string() : it->second;
}

bool matches(const Predicate& p, const TableRecord& record, const TableSchema& schema) {
  if (!schema.has_field(p.field)) return false;
  const std::string value = record.get(p.field);
  switch (p.op) {
    case PredicateOp::kEq: return value == p.value;
    case PredicateOp::kNeq: return value != p.value;
    case PredicateOp::kLike: return lower(value).find(lower(p.value)) != std::string::npos;
  }
  return false;
}

std::vector<TableRecord> evaluate_query(const QueryPlan& plan, const Table& table,
                                        const std::vector<std::string>& fields,
                                        std::optional<std::size_t> limit) {
  if (plan.order && !table.schema.has_field(plan.order->field)) {
    throw Error(ErrorKind::kUnknownField,
                "unknown field '" + plan.order->field + "' in ORDERBY for table " + table.schema.name);
  }
  std::vector<const TableRecord*> hits;
  for (const auto& record : table.records) {
    const bool ok = std::all_of(plan.conjuncts.begin(), plan.conjuncts.end(),
                                [&](const Predicate& p) { return matches(p, record, table.schema); });
    if (ok) hits.push_back(&record);
  }
  if (plan.order) {
    const auto& order = *plan.order;
    const FieldDef* def = table.schema.find(order.field);
    const bool numeric = def != nullptr && def->numeric();
    std::stable_sort(hits.begin(), hits.end(), [&](const TableRecord* a, const TableRecord* b) {
      int c = compare_values(a->get(order.field), b->get(order.field), numeric);
      if (order.direction == SortDirection::kDesc) c = -c;
      if (c != 0) return c < 0;
      return a->sys_id < b->sys_id;
    });
  }
  if (limit && hits.size() > *limit) hits.resize(*limit);

  std::vector<TableRecord> out;
  out.reserve(hits.size());
  for (const TableRecord* r : hits) {
    if (fields.empty()) {
      out.push_back(*r);
      continue;
    }
    TableRecord projected;
    projected.sys_id = r->sys_id;
    projected.ordinal = r->ordinal;
    for (const auto& f : fields) {
      if (f == "sys_id") continue;
      if (table.schema.has_field(f)) projected.fields.emplace(f, r->get(f));
    }
    out.push_back(std::move(projected));
  }
  return out;
}

}  // namespace starshell

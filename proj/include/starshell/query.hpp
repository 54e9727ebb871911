#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace starshell {

enum class PredicateOp { kEq, kNeq, kLike };
enum class SortDirection { kAsc, kDesc };

struct Predicate {
  std::string field;
  PredicateOp op = PredicateOp::kEq;
  std::string value;

  bool operator==(const Predicate&) const = default;
};

struct OrderClause {
  std::string field;
  SortDirection direction = SortDirection::kAsc;

  bool operator==(const OrderClause&) const = default;
};

// A conjunction of predicates plus at most one ordering.
struct QueryPlan {
  std::vector<Predicate> conjuncts;
  std::optional<OrderClause> order;

  bool operator==(const QueryPlan&) const = default;
};

// sysparm_query grammar: tokens joined by '^'; "field=value", "field!=value",
// "fieldLIKEvalue", "ORDERBYfield", "ORDERBYDESCfield". OR/NQ are rejected.
QueryPlan parse_query(std::string_view query);
std::string render_query(const QueryPlan& plan);

// ---------------------------------------------------------------------------

enum class FieldType { kString, kNumeric, kBoolean, kDateTime, kReference };

FieldType parse_field_type(std::string_view tag);
std::string_view to_string(FieldType type);

struct FieldDef {
  std::string name;
  std::string label;
  std::string type_tag = "string";

  bool numeric() const { return parse_field_type(type_tag) == FieldType::kNumeric; }
};

struct TableSchema {
  std::string name;
  std::string label;
  std::vector<FieldDef> fields;

  const FieldDef* find(std::string_view field) const;
  // Schema fields plus the implicit sys_id and sys_created_on.
  bool has_field(std::string_view field) const;
};

struct TableRecord {
  std::string sys_id;
  std::int64_t ordinal = 0;  // creation order; sys_created_on renders it
  std::map<std::string, std::string> fields;

  // Returns "" for fields the record does not carry.
  std::string get(std::string_view field) const;
};

struct Table {
  TableSchema schema;
  std::vector<TableRecord> records;  // insertion order
};

bool matches(const Predicate& p, const TableRecord& record, const TableSchema& schema);

// Filters with every conjunct, sorts per the order clause (ties by sys_id),
// truncates to `limit`, and projects to `fields` plus sys_id.
std::vector<TableRecord> evaluate_query(const QueryPlan& plan, const Table& table,
                                        const std::vector<std::string>& fields = {},
                                        std::optional<std::size_t> limit = std::nullopt);

}  // namespace starshell

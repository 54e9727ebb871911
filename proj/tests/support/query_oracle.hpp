#pragma once

// Brute-force reference for the encoded-query engine, written from the
// grammar description alone: split on '^', classify each token, filter every
// record against every condition, then sort with a plain comparator.

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "starshell/query.hpp"

namespace oracle {

struct Cond {
  std::string field;
  std::string op;  // "=", "!=", "LIKE"
  std::string value;
};

struct Parsed {
  std::vector<Cond> conds;
  std::string order_field;
  bool desc = false;
};

inline Parsed parse(const std::string& q) {
  Parsed p;
  std::stringstream ss(q);
  std::string tok;
  while (std::getline(ss, tok, '^')) {
    if (tok.empty()) continue;
    if (tok.rfind("ORDERBYDESC", 0) == 0) {
      p.order_field = tok.substr(11);
      p.desc = true;
      continue;
    }
    if (tok.rfind("ORDERBY", 0) == 0) {
      p.order_field = tok.substr(7);
      continue;
    }
    // Earliest operator wins.
    std::size_t best = std::string::npos;
    std::string op;
    for (const std::string candidate : {"!=", "LIKE", "="}) {
      const auto at = tok.find(candidate);
      if (at < best) {
        best = at;
        op = candidate;
      }
    }
    p.conds.push_back({tok.substr(0, best), op, tok.substr(best + op.size())});
  }
  return p;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::optional<double> number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::istringstream in(s);
  double v = 0;
  in >> v;
  if (in.fail() || !in.eof()) return std::nullopt;
  return v;
}

inline std::vector<starshell::TableRecord> run(const std::string& q, const starshell::Table& table) {
  const Parsed p = parse(q);
  std::vector<starshell::TableRecord> out;
  for (const auto& r : table.records) {
    bool keep = true;
    for (const auto& c : p.conds) {
      if (!table.schema.has_field(c.field)) {
        keep = false;
        break;
      }
      const std::string v = r.get(c.field);
      if (c.op == "=") keep = v == c.value;
      else if (c.op == "!=") keep = v != c.value;
      else keep = lower(v).find(lower(c.value)) != std::string::npos;
      if (!keep) break;
    }
    if (keep) out.push_back(r);
  }
  if (!p.order_field.empty()) {
    const auto* def = table.schema.find(p.order_field);
    const bool numeric = def != nullptr && def->numeric();
    std::sort(out.begin(), out.end(), [&](const starshell::TableRecord& a, const starshell::TableRecord& b) {
      const std::string va = a.get(p.order_field);
      const std::string vb = b.get(p.order_field);
      int c = 0;
      if (numeric && (number(va) || number(vb))) {
        if (!number(va)) c = -1;
        else if (!number(vb)) c = 1;
        else c = *number(va) < *number(vb) ? -1 : (*number(va) > *number(vb) ? 1 : 0);
      } else {
        c = va < vb ? -1 : (va > vb ? 1 : 0);
      }
      if (p.desc) c = -c;
      if (c != 0) return c < 0;
      return a.sys_id < b.sys_id;
    });
  }
  return out;
}

// Random table: string, integer and boolean columns, small value pools so
// that equality predicates hit.
inline starshell::Table random_table(std::mt19937_64& rng, std::size_t max_records) {
  starshell::Table t;
  t.schema.name = "incident";
  t.schema.fields = {{"number", "Number", "string"},
                     {"short_description", "Short description", "string"},
                     {"priority", "Priority", "integer"},
                     {"state", "State", "integer"},
                     {"active", "Active", "boolean"},
                     {"category", "Category", "string"}};
  static const std::vector<std::string> words = {"Email", "email", "VPN", "printer", "Laptop", "network", "Network down",
                                                 "reset", "", "a^b"};
  static const std::vector<std::string> cats = {"software", "hardware", "network", "", "inquiry"};
  std::uniform_int_distribution<std::size_t> n_dist(0, max_records);
  const std::size_t n = n_dist(rng);
  for (std::size_t i = 0; i < n; ++i) {
    starshell::TableRecord r;
    char id[33];
    std::snprintf(id, sizeof id, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    r.sys_id = id;
    r.ordinal = static_cast<std::int64_t>(i);
    r.fields["number"] = "INC" + std::to_string(1000 + rng() % 50);
    r.fields["short_description"] = words[rng() % words.size()];
    // Some priorities are not numbers, some are missing.
    const auto roll = rng() % 10;
    if (roll == 0) r.fields["priority"] = "high";
    else if (roll != 1) r.fields["priority"] = std::to_string(1 + rng() % 5) + (rng() % 4 == 0 ? ".5" : "");
    r.fields["state"] = std::to_string(static_cast<int>(rng() % 9) - 1);
    r.fields["active"] = rng() % 2 ? "true" : "false";
    r.fields["category"] = cats[rng() % cats.size()];
    t.records.push_back(std::move(r));
  }
  return t;
}

// A grammar-valid query: 0-3 conditions, optional ORDERBY / ORDERBYDESC.
inline std::string random_query(std::mt19937_64& rng) {
  static const std::vector<std::string> fields = {"number", "short_description", "priority", "state",
                                                  "active", "category", "sys_id", "nosuchfield"};
  static const std::vector<std::string> values = {"true", "false", "1", "2", "3.5", "email", "Email", "net",
                                                  "INC1010", "", "hardware", "-1", "high"};
  static const std::vector<std::string> ops = {"=", "!=", "LIKE"};
  std::vector<std::string> tokens;
  const auto n = rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back(fields[rng() % fields.size()] + ops[rng() % ops.size()] + values[rng() % values.size()]);
  }
  if (rng() % 2) {
    static const std::vector<std::string> order_fields = {"priority", "state", "number", "short_description",
                                                          "category", "sys_id", "active"};
    const std::string f = order_fields[rng() % order_fields.size()];
    tokens.insert(tokens.begin() + static_cast<long>(rng() % (tokens.size() + 1)),
                  (rng() % 2 ? "ORDERBYDESC" : "ORDERBY") + f);
  }
  std::string q;
  for (std::size_t i = 0; i < tokens.size(); ++i) q += (i ? "^" : "") + tokens[i];
  return q;
}

inline bool same(const std::vector<starshell::TableRecord>& a, const std::vector<starshell::TableRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].sys_id != b[i].sys_id || a[i].fields != b[i].fields) return false;
  }
  return true;
}

}  // namespace oracle

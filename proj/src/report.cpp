#include "starshell/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "starshell/error.hpp"
#include "starshell/metrics.hpp"

namespace starshell {
namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string percent(double fraction) { return fixed(fraction * 100.0, 1); }

}  // namespace

std::vector<bool> best_equivalent(const std::vector<SuiteResult>& results) {
  std::map<std::string, std::size_t> best;  // platform -> row index
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].aggregates.n == 0) continue;
    auto it = best.find(results[i].platform);
    if (it == best.end() || results[i].aggregates.sr > results[it->second].aggregates.sr) best[results[i].platform] = i;
  }
  std::vector<bool> marked(results.size(), false);
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto it = best.find(results[i].platform);
    if (it == best.end()) continue;
    const auto& top = results[it->second].aggregates;
    marked[i] = top.sr - results[i].aggregates.sr <= top.se;
  }
  return marked;
}

Json task_result_to_json(const TaskResult& t, bool include_timing) {
  Json checks = Json::array();
  for (const auto& c : t.checks) checks.push_back({{"passed", c.passed}, {"detail", c.detail}});
  Json outcomes = Json::array();
  for (auto o : t.outcomes) outcomes.push_back(std::string(to_string(o)));
  Json j{{"task_id", t.task_id},
         {"category", t.category},
         {"kind", std::string(to_string(t.kind))},
         {"status", std::string(to_string(t.status))},
         {"success", t.success()},
         {"checks", checks},
         {"trace", t.trace_ref},
         {"cost_picodollars", t.cost.pico()},
         {"cost_usd", t.cost.to_string(6)},
         {"tool_calls", t.tool_calls},
         {"termination", t.termination},
         {"error", t.error},
         {"outcomes", outcomes}};
  if (include_timing) j["wall_clock_seconds"] = t.wall_clock_seconds;
  return j;
}

TaskResult task_result_from_json(const Json& j) {
  TaskResult t;
  t.task_id = j.at("task_id").get<std::string>();
  t.category = j.value("category", "");
  t.kind = j.value("kind", "write") == "read" ? TaskKind::kRead : TaskKind::kWrite;
  t.status = parse_task_status(j.at("status").get<std::string>());
  for (const auto& c : j.value("checks", Json::array())) t.checks.push_back({c.at("passed").get<bool>(), c.value("detail", "")});
  t.trace_ref = j.value("trace", "");
  t.cost = Money::from_pico(j.at("cost_picodollars").get<std::int64_t>());
  t.tool_calls = j.at("tool_calls").get<std::size_t>();
  t.termination = j.value("termination", "");
  t.error = j.value("error", "");
  for (const auto& o : j.value("outcomes", Json::array())) {
    const auto label = o.get<std::string>();
    const auto category = parse_outcome_category(label);
    if (!category) throw Error(ErrorKind::kInvalidArgument, "unknown outcome label '" + label + "'");
    t.outcomes.push_back(*category);
  }
  t.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return t;
}

std::string emit_report(const std::vector<SuiteResult>& results, ReportFormat format, const ReportOptions& options) {
  const auto marked = best_equivalent(results);

  if (format == ReportFormat::kStructured) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      const auto& a = r.aggregates;
      Json row{{"suite", r.suite},
               {"platform", r.platform},
               {"agent", r.agent},
               {"n", a.n},
               {"successes", a.successes},
               {"invalid", a.invalid},
               {"environment_failures", a.environment_failures},
               {"sr", a.sr},
               {"se", a.se},
               {"sr_percent", percent(a.sr)},
               {"se_pp", percent(a.se)},
               {"total_cost_picodollars", a.total_cost.pico()},
               {"mean_cost_usd", a.mean_cost_string(2)},
               {"total_tool_calls", a.total_tool_calls},
               {"mean_tool_calls", a.mean_tool_calls},
               {"best", static_cast<bool>(marked[i])}};
      if (options.include_timing) row["mean_wall_clock_seconds"] = a.mean_wall_clock_seconds;
      if (options.include_tasks) {
        Json tasks = Json::array();
        for (const auto& t : r.tasks) tasks.push_back(task_result_to_json(t, options.include_timing));
        row["tasks"] = std::move(tasks);
      }
      rows.push_back(std::move(row));
    }
    return Json{{"rows", rows}}.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "| Platform | Agent | n | SR (%) | SE (pp) | Cost ($) | Tool calls";
  if (options.include_timing) out << " | Wall-clock (s)";
  out << " |\n|---|---|---:|---:|---:|---:|---:";
  if (options.include_timing) out << "|---:";
  out << "|\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& a = r.aggregates;
    const std::string sr = a.n == 0 ? "-" : percent(a.sr);
    out << "| " << r.platform << " | " << r.agent << " | " << a.n << " | "
        << (marked[i] ? "**" + sr + "**" : sr) << " | " << (a.n == 0 ? "-" : percent(a.se)) << " | "
        << a.mean_cost_string(2) << " | " << fixed(a.mean_tool_calls, 1);
    if (options.include_timing) out << " | " << fixed(a.mean_wall_clock_seconds, 1);
    out << " |\n";
  }
  bool any_excluded = false;
  for (const auto& r : results) any_excluded |= r.aggregates.invalid + r.aggregates.environment_failures > 0;
  if (any_excluded) {
    out << "\nExcluded from n:";
    for (const auto& r : results) {
      out << " " << r.agent << ": " << r.aggregates.invalid << " invalid-task, " << r.aggregates.environment_failures
          << " environment-failure;";
    }
    out << "\n";
  }
  if (options.include_tasks) {
    for (const auto& r : results) {
      out << "\n## " << r.suite << " / " << r.agent << "\n\n";
      out << "| Task | Category | Status | Tool calls | Cost ($) | Termination |\n";
      out << "|---|---|---|---:|---:|---|\n";
      for (const auto& t : r.tasks) {
        out << "| " << t.task_id << " | " << t.category << " | " << to_string(t.status) << " | " << t.tool_calls
            << " | " << t.cost.to_string(4) << " | " << (t.termination.empty() ? "-" : t.termination) << " |\n";
      }
    }
  }
  return out.str();
}

std::vector<SuiteResult> parse_structured_report(std::string_view text) {
  std::vector<SuiteResult> out;
  try {
    const Json j = Json::parse(text);
    for (const auto& row : j.at("rows")) {
      SuiteResult r;
      r.suite = row.value("suite", "");
      r.platform = row.at("platform").get<std::string>();
      r.agent = row.at("agent").get<std::string>();
      auto& a = r.aggregates;
      a.n = row.at("n").get<std::size_t>();
      a.successes = row.at("successes").get<std::size_t>();
      a.invalid = row.value("invalid", std::size_t{0});
      a.environment_failures = row.value("environment_failures", std::size_t{0});
      a.sr = row.at("sr").get<double>();
      a.se = row.at("se").get<double>();
      a.total_cost = Money::from_pico(row.at("total_cost_picodollars").get<std::int64_t>());
      a.total_tool_calls = row.at("total_tool_calls").get<std::size_t>();
      a.mean_tool_calls = row.at("mean_tool_calls").get<double>();
      a.mean_wall_clock_seconds = row.value("mean_wall_clock_seconds", 0.0);
      for (const auto& t : row.value("tasks", Json::array())) r.tasks.push_back(task_result_from_json(t));
      out.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
  return out;
}

}  // namespace starshell

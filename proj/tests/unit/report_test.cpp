#include <gtest/gtest.h>

#include "starshell/metrics.hpp"
#include "starshell/report.hpp"

using namespace starshell;

namespace {

SuiteResult row(std::string platform, std::string agent, std::size_t successes, std::size_t n) {
  SuiteResult r;
  r.suite = "s";
  r.platform = std::move(platform);
  r.agent = std::move(agent);
  for (std::size_t i = 0; i < n; ++i) {
    TaskResult t;
    t.task_id = "t" + std::to_string(i);
    t.category = "c";
    t.status = i < successes ? TaskStatus::kSuccess : TaskStatus::kFailure;
    t.cost = Money::from_pico(4'500'000'000 * static_cast<std::int64_t>(i + 1));
    t.tool_calls = i + 1;
    t.wall_clock_seconds = 0.25;
    t.termination = "final_message";
    t.outcomes = {OutcomeCategory::kSuccess};
    r.tasks.push_back(t);
  }
  r.aggregates = compute_aggregates(r.tasks);
  return r;
}

}  // namespace

TEST(Report, BestEquivalentPerPlatform) {
  // sr 0.8 se 0.126; 0.7 is inside one SE, 0.5 is not.
  const std::vector<SuiteResult> rows = {row("servicenow", "terminal", 8, 10), row("servicenow", "tools", 7, 10),
                                         row("servicenow", "web", 5, 10), row("erpnext", "tools", 1, 10)};
  EXPECT_EQ(best_equivalent(rows), (std::vector<bool>{true, true, false, true}));
}

TEST(Report, MarkdownTable) {
  const std::vector<SuiteResult> rows = {row("servicenow", "terminal", 3, 4)};
  const std::string md = emit_report(rows, ReportFormat::kMarkdown);
  EXPECT_NE(md.find("| Platform | Agent | n | SR (%) | SE (pp) | Cost ($) | Tool calls |"), std::string::npos) << md;
  // sr 75.0, se sqrt(.75*.25/4) = 21.65, mean cost 0.01125 -> 0.01
  EXPECT_NE(md.find("| servicenow | terminal | 4 | **75.0** | 21.7 | 0.01 | 2.5 |"), std::string::npos) << md;
  EXPECT_EQ(md.find("Wall-clock"), std::string::npos);
  EXPECT_NE(emit_report(rows, ReportFormat::kMarkdown, {true, true}).find("Wall-clock"), std::string::npos);
}

TEST(Report, StructuredRoundTrip) {
  const std::vector<SuiteResult> rows = {row("servicenow", "terminal", 3, 4), row("erpnext", "tools", 0, 2)};
  const std::string text = emit_report(rows, ReportFormat::kStructured);
  const auto back = parse_structured_report(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].aggregates.total_cost.pico(), rows[0].aggregates.total_cost.pico());
  EXPECT_EQ(back[0].tasks.size(), 4u);
  EXPECT_EQ(back[0].tasks[1].cost.pico(), rows[0].tasks[1].cost.pico());
  EXPECT_EQ(back[0].tasks[0].outcomes, rows[0].tasks[0].outcomes);
  EXPECT_EQ(back[0].tasks[0].wall_clock_seconds, 0.0);
  EXPECT_EQ(emit_report(back, ReportFormat::kStructured), text);
}

TEST(Report, TaskResultJson) {
  TaskResult t = row("p", "a", 1, 1).tasks[0];
  t.checks = {{false, "no record"}};
  t.error = "boom";
  const TaskResult back = task_result_from_json(task_result_to_json(t, true));
  EXPECT_EQ(back.status, TaskStatus::kSuccess);
  EXPECT_EQ(back.checks[0].detail, "no record");
  EXPECT_EQ(back.error, "boom");
  EXPECT_DOUBLE_EQ(back.wall_clock_seconds, 0.25);
}

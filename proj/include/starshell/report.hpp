#pragma once

#include <string>
#include <vector>

#include "starshell/results.hpp"

namespace starshell {

enum class ReportFormat { kMarkdown, kStructured };

struct ReportOptions {
  // Wall-clock varies run to run; leaving it out makes reports of two
  // replays byte-identical.
  bool include_timing = false;
  bool include_tasks = true;
};

// Rows whose SR is within one standard error (of the best row) of the best
// row of the same platform.
std::vector<bool> best_equivalent(const std::vector<SuiteResult>& results);

std::string emit_report(const std::vector<SuiteResult>& results, ReportFormat format, const ReportOptions& options = {});

// Reads back a structured report. Aggregates and per-task records round-trip
// exactly; wall-clock is zero when the report was emitted without timing.
std::vector<SuiteResult> parse_structured_report(std::string_view text);

Json task_result_to_json(const TaskResult& t, bool include_timing);
TaskResult task_result_from_json(const Json& j);

}  // namespace starshell

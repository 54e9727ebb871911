#pragma once

#include <string>
#include <vector>

#include "starshell/money.hpp"
#include "starshell/outcome.hpp"
#include "starshell/prompts.hpp"
#include "starshell/suite.hpp"
#include "starshell/trace.hpp"

namespace starshell {

enum class TaskStatus { kSuccess, kFailure, kInvalidTask, kEnvironmentFailure };
std::string_view to_string(TaskStatus status);
TaskStatus parse_task_status(std::string_view text);

struct TaskResult {
  std::string task_id;
  std::string category;
  TaskKind kind = TaskKind::kWrite;
  TaskStatus status = TaskStatus::kFailure;
  std::vector<CheckResult> checks;
  std::string trace_ref;  // relative to the run directory; empty if no episode ran
  Money cost;
  std::size_t tool_calls = 0;
  double wall_clock_seconds = 0.0;
  std::string termination;
  std::string error;
  std::vector<OutcomeCategory> outcomes;  // one per tool call, in order

  bool success() const { return status == TaskStatus::kSuccess; }
  // Invalid tasks and environment failures are not scored.
  bool scored() const { return status == TaskStatus::kSuccess || status == TaskStatus::kFailure; }
};

struct SuiteAggregates {
  std::size_t n = 0;  // scored tasks
  std::size_t successes = 0;
  std::size_t invalid = 0;
  std::size_t environment_failures = 0;
  double sr = 0.0;
  double se = 0.0;
  Money total_cost;
  std::size_t total_tool_calls = 0;
  double mean_tool_calls = 0.0;
  double mean_wall_clock_seconds = 0.0;

  std::string mean_cost_string(int decimals = 2) const {
    return n == 0 ? Money().to_string(decimals) : total_cost.mean_string(static_cast<std::int64_t>(n), decimals);
  }
};

struct SuiteResult {
  std::string suite;
  std::string platform;  // profile id
  std::string agent;     // row label, e.g. "terminal" or "terminal+skills (planner_executor)"
  std::vector<TaskResult> tasks;
  SuiteAggregates aggregates;
};

}  // namespace starshell

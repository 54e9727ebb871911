#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starshell/money.hpp"
#include "starshell/outcome.hpp"
#include "starshell/prompts.hpp"
#include "starshell/provider.hpp"
#include "starshell/sandbox.hpp"

namespace starshell {

enum class Phase { kSingle, kPlanner, kExecutor };
std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view text);

enum class TerminationReason { kFinalMessage, kToolCallLimit, kProviderError };
std::string_view to_string(TerminationReason reason);
TerminationReason parse_termination_reason(std::string_view text);

struct ToolResult {
  ToolInvocation invocation;
  std::string toolset;  // "unknown" when no toolset offers the tool
  std::string observation;
  std::optional<ExecResult> exec;
  std::optional<OutcomeCategory> outcome;
  bool denied = false;
};

struct TraceStep {
  Phase phase = Phase::kSingle;
  // tool_calls holds the calls that were dispatched; calls past the budget
  // are counted in dropped_tool_calls.
  ModelTurn model_turn;
  std::vector<ToolResult> tool_results;
  std::size_t dropped_tool_calls = 0;
};

struct PhaseSummary {
  Phase phase = Phase::kSingle;
  TokenUsage usage;
  Money cost;
  std::size_t tool_calls = 0;
  std::size_t steps = 0;
};

struct Trace {
  std::string task_id;
  std::string model;
  std::string goal;
  std::vector<TraceStep> steps;
  TokenUsage total_usage;
  Money total_cost;
  std::size_t tool_call_count = 0;
  double wall_clock_seconds = 0.0;
  std::string final_message;
  std::map<std::string, std::size_t> toolset_calls;
  TerminationReason termination = TerminationReason::kFinalMessage;
  std::optional<std::string> error;
  bool fallback = false;
  std::vector<PhaseSummary> phases;
  std::optional<Plan> plan;

  // calls per toolset / tool_call_count; empty when no calls were made.
  std::map<std::string, double> toolset_shares() const;
  bool failed() const { return termination == TerminationReason::kProviderError; }
};

// Line-delimited records: a header, one line per step, then a summary.
// Without timing, durations and wall-clock are left out so two replays of
// the same script serialize identically.
std::string trace_to_jsonl(const Trace& trace, bool include_timing = true);
Trace trace_from_jsonl(std::string_view text);
void write_trace(const Trace& trace, const std::string& path);
Trace read_trace(const std::string& path);

// Human-readable episode dump for `trace show`.
std::string render_trace(const Trace& trace);

}  // namespace starshell

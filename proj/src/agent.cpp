#include "starshell/agent.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "starshell/error.hpp"

namespace starshell {
namespace {

bool has_kind(std::span<Toolset* const> toolsets, ToolsetKind kind) {
  return std::any_of(toolsets.begin(), toolsets.end(), [kind](const Toolset* t) { return t->kind() == kind; });
}

Toolset* find_toolset(std::span<Toolset* const> toolsets, std::string_view tool) {
  for (Toolset* t : toolsets) {
    if (t->has_tool(tool)) return t;
  }
  return nullptr;
}

std::vector<ToolSchema> collect_schemas(std::span<Toolset* const> toolsets) {
  std::vector<ToolSchema> out;
  for (const Toolset* t : toolsets) {
    for (const auto& s : t->schemas()) {
      const bool seen = std::any_of(out.begin(), out.end(), [&](const ToolSchema& o) { return o.name == s.name; });
      if (!seen) out.push_back(s);
    }
  }
  return out;
}

std::vector<std::string> registry_tool_names(std::span<Toolset* const> toolsets) {
  std::vector<std::string> names;
  for (const Toolset* t : toolsets) {
    if (t->kind() != ToolsetKind::kRegistry) continue;
    for (const auto& s : t->schemas()) names.push_back(s.name);
  }
  return names;
}

ToolResult dispatch_one(const ToolInvocation& call, std::span<Toolset* const> toolsets, bool read_only) {
  ToolResult result;
  result.invocation = call;
  Toolset* target = find_toolset(toolsets, call.tool_name);
  ExecFlags flags;
  if (target == nullptr) {
    result.toolset = "unknown";
    result.observation = Json{{"error", {{"message", "Unknown tool: " + call.tool_name}, {"detail", ""}}},
                              {"status", "failure"}}
                             .dump();
  } else {
    result.toolset = target->name();
    ToolOutput out = target->dispatch(call, DispatchContext{read_only});
    result.observation = std::move(out.observation);
    result.exec = std::move(out.exec);
    result.denied = out.denied;
    if (result.exec) {
      flags = ExecFlags{result.exec->exit_code, result.exec->timed_out};
    } else if (target->kind() == ToolsetKind::kTerminal) {
      // Refused or malformed before reaching the shell.
      flags.exit_code = result.denied ? 126 : 2;
    }
  }
  result.outcome = classify_outcome(result.observation, flags);
  return result;
}

struct PhaseRun {
  std::string final_message;
  TerminationReason termination = TerminationReason::kFinalMessage;
  std::optional<std::string> error;
};

// One reason-execute-observe loop. Appends steps to `trace` and stops at a
// final message, the shared budget, or a provider error.
PhaseRun run_phase(Phase phase, const std::string& system_prompt, const std::string& goal, bool read_only,
                   std::span<Toolset* const> toolsets, Provider& provider, const PricingTable& pricing,
                   const AgentConfig& config, Trace& trace) {
  const std::vector<ToolSchema> tools = collect_schemas(toolsets);
  std::vector<ChatMessage> history{ChatMessage::system(system_prompt), ChatMessage::user(goal)};
  PhaseSummary summary{phase, {}, {}, 0, 0};
  PhaseRun run;

  while (true) {
    if (trace.tool_call_count >= config.max_tool_calls) {
      run.termination = TerminationReason::kToolCallLimit;
      break;
    }
    ModelTurn turn;
    try {
      turn = provider.complete(history, tools, config.model);
    } catch (const std::exception& e) {
      run.termination = TerminationReason::kProviderError;
      run.error = e.what();
      break;
    }
    const Money cost = compute_cost(turn.usage, config.model, pricing);
    summary.usage += turn.usage;
    summary.cost += cost;
    trace.total_usage += turn.usage;
    trace.total_cost += cost;
    ++summary.steps;

    TraceStep step;
    step.phase = phase;
    if (!turn.has_tool_calls()) {
      run.final_message = turn.text.value_or("");
      step.model_turn = std::move(turn);
      trace.steps.push_back(std::move(step));
      run.termination = TerminationReason::kFinalMessage;
      break;
    }

    const std::size_t room = config.max_tool_calls - trace.tool_call_count;
    if (turn.tool_calls.size() > room) {
      step.dropped_tool_calls = turn.tool_calls.size() - room;
      turn.tool_calls.resize(room);
    }
    history.push_back(ChatMessage::assistant(turn));
    for (const auto& call : turn.tool_calls) {
      ToolResult result = dispatch_one(call, toolsets, read_only);
      history.push_back(ChatMessage::tool(call.id, result.observation));
      ++trace.toolset_calls[result.toolset];
      ++trace.tool_call_count;
      ++summary.tool_calls;
      step.tool_results.push_back(std::move(result));
    }
    step.model_turn = std::move(turn);
    trace.steps.push_back(std::move(step));
  }
  trace.phases.push_back(summary);
  return run;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Trace begin_trace(const EpisodeRequest& request, const PricingTable& pricing) {
  if (pricing.find(request.config.model) == nullptr) {
    throw Error(ErrorKind::kUnknownModel, "no pricing for model '" + request.config.model + "'");
  }
  Trace trace;
  trace.task_id = request.task_id;
  trace.model = request.config.model;
  trace.goal = request.goal;
  return trace;
}

void finish(Trace& trace, const PhaseRun& run, std::chrono::steady_clock::time_point started) {
  trace.final_message = run.final_message;
  trace.termination = run.termination;
  trace.error = run.error;
  trace.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
}

}  // namespace

void validate_config(const AgentConfig& config, std::span<Toolset* const> toolsets) {
  if (config.max_tool_calls == 0) throw Error(ErrorKind::kInvalidConfig, "max_tool_calls must be positive");
  switch (config.paradigm) {
    case Paradigm::kTerminal:
      if (!has_kind(toolsets, ToolsetKind::kTerminal)) {
        throw Error(ErrorKind::kInvalidConfig, "terminal paradigm needs a terminal toolset");
      }
      break;
    case Paradigm::kToolRegistry:
      if (!has_kind(toolsets, ToolsetKind::kRegistry)) {
        throw Error(ErrorKind::kInvalidConfig, "tool_registry paradigm needs a registry toolset");
      }
      break;
    case Paradigm::kWebAdapter:
      if (!has_kind(toolsets, ToolsetKind::kWeb)) {
        throw Error(ErrorKind::kInvalidConfig, "web_adapter paradigm needs an externally supplied web toolset");
      }
      break;
    case Paradigm::kHybrid:
      if (toolsets.size() < 2) throw Error(ErrorKind::kInvalidConfig, "hybrid paradigm needs at least two toolsets");
      break;
  }
}

Trace run_episode(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                  const PricingTable& pricing) {
  validate_config(request.config, toolsets);
  const auto started = std::chrono::steady_clock::now();
  Trace trace = begin_trace(request, pricing);
  const std::string prompt = assemble_system_prompt(request.profile, request.config, PromptRole::kSingle, nullptr,
                                                    registry_tool_names(toolsets), has_kind(toolsets, ToolsetKind::kWeb));
  const PhaseRun run =
      run_phase(Phase::kSingle, prompt, request.goal, false, toolsets, provider, pricing, request.config, trace);
  finish(trace, run, started);
  return trace;
}

Trace run_planner_executor(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                           const PricingTable& pricing) {
  validate_config(request.config, toolsets);
  const auto started = std::chrono::steady_clock::now();
  Trace trace = begin_trace(request, pricing);
  const auto names = registry_tool_names(toolsets);
  const bool web = has_kind(toolsets, ToolsetKind::kWeb);

  const std::string planner_prompt =
      assemble_system_prompt(request.profile, request.config, PromptRole::kPlanner, nullptr, names, web);
  const PhaseRun planned =
      run_phase(Phase::kPlanner, planner_prompt, request.goal, true, toolsets, provider, pricing, request.config, trace);
  if (planned.termination == TerminationReason::kProviderError) {
    finish(trace, planned, started);
    return trace;
  }

  std::string executor_prompt;
  try {
    trace.plan = extract_plan(planned.final_message);
    executor_prompt =
        assemble_system_prompt(request.profile, request.config, PromptRole::kExecutor, &*trace.plan, names, web);
  } catch (const Error&) {
    trace.fallback = true;
    executor_prompt = assemble_system_prompt(request.profile, request.config, PromptRole::kSingle, nullptr, names, web);
  }
  const PhaseRun executed = run_phase(Phase::kExecutor, executor_prompt, request.goal, false, toolsets, provider,
                                      pricing, request.config, trace);
  finish(trace, executed, started);
  return trace;
}

Trace run_agent(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                const PricingTable& pricing) {
  if (request.config.orchestration == Orchestration::kPlannerExecutor) {
    return run_planner_executor(request, toolsets, provider, pricing);
  }
  return run_episode(request, toolsets, provider, pricing);
}

Plan extract_plan(std::string_view message) {
  // Last line that is exactly the heading, ignoring surrounding spaces.
  std::optional<std::size_t> body_start;
  std::size_t pos = 0;
  while (pos <= message.size()) {
    const auto nl = message.find('\n', pos);
    const auto line = message.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (trim(line) == "### Plan") body_start = nl == std::string_view::npos ? message.size() : nl + 1;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!body_start) throw Error(ErrorKind::kNoPlanHeading, "planner reply has no \"### Plan\" heading");

  Plan plan;
  plan.raw = std::string(message);
  std::string_view body = message.substr(*body_start);
  pos = 0;
  while (pos <= body.size()) {
    const auto nl = body.find('\n', pos);
    const std::string line = trim(body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
    if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
      const std::string step = trim(std::string_view(line).substr(digits + 1));
      if (!step.empty()) plan.steps.push_back(step);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (plan.steps.empty()) throw Error(ErrorKind::kEmptyPlan, "\"### Plan\" heading is not followed by numbered steps");
  return plan;
}

}  // namespace starshell

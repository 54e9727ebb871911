#include "starshell/trace.hpp"

#include <fstream>
#include <sstream>

#include "starshell/error.hpp"

namespace starshell {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kSingle: return "single";
    case Phase::kPlanner: return "planner";
    case Phase::kExecutor: return "executor";
  }
  return "single";
}

Phase parse_phase(std::string_view text) {
  if (text == "single") return Phase::kSingle;
  if (text == "planner") return Phase::kPlanner;
  if (text == "executor") return Phase::kExecutor;
  throw Error(ErrorKind::kInvalidArgument, "unknown phase '" + std::string(text) + "'");
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kFinalMessage: return "final_message";
    case TerminationReason::kToolCallLimit: return "tool_call_limit";
    case TerminationReason::kProviderError: return "provider_error";
  }
  return "final_message";
}

TerminationReason parse_termination_reason(std::string_view text) {
  if (text == "final_message") return TerminationReason::kFinalMessage;
  if (text == "tool_call_limit") return TerminationReason::kToolCallLimit;
  if (text == "provider_error") return TerminationReason::kProviderError;
  throw Error(ErrorKind::kInvalidArgument, "unknown termination reason '" + std::string(text) + "'");
}

std::map<std::string, double> Trace::toolset_shares() const {
  std::map<std::string, double> shares;
  if (tool_call_count == 0) return shares;
  for (const auto& [name, n] : toolset_calls) {
    shares[name] = static_cast<double>(n) / static_cast<double>(tool_call_count);
  }
  return shares;
}

namespace {

Json exec_to_json(const ExecResult& e, bool timing) {
  Json j{{"stdout", e.stdout_text},   {"stderr", e.stderr_text}, {"combined", e.combined},
         {"exit_code", e.exit_code},  {"truncated", e.truncated}, {"timed_out", e.timed_out}};
  if (timing) j["duration_seconds"] = e.duration_seconds;
  return j;
}

ExecResult exec_from_json(const Json& j) {
  ExecResult e;
  e.stdout_text = j.value("stdout", "");
  e.stderr_text = j.value("stderr", "");
  e.combined = j.value("combined", "");
  e.exit_code = j.value("exit_code", 0);
  e.truncated = j.value("truncated", false);
  e.timed_out = j.value("timed_out", false);
  e.duration_seconds = j.value("duration_seconds", 0.0);
  return e;
}

Json usage_json(const TokenUsage& u) { return u; }

Json model_turn_json(const ModelTurn& t) {
  Json j{{"tool_calls", t.tool_calls}, {"usage", usage_json(t.usage)}};
  j["text"] = t.text ? Json(*t.text) : Json(nullptr);
  return j;
}

Json step_to_json(const TraceStep& s, bool timing) {
  Json results = Json::array();
  for (const auto& r : s.tool_results) {
    Json jr{{"invocation", r.invocation}, {"toolset", r.toolset}, {"observation", r.observation}, {"denied", r.denied}};
    if (r.exec) jr["exec"] = exec_to_json(*r.exec, timing);
    if (r.outcome) jr["outcome"] = std::string(to_string(*r.outcome));
    results.push_back(std::move(jr));
  }
  return Json{{"type", "step"},
              {"phase", std::string(to_string(s.phase))},
              {"model_turn", model_turn_json(s.model_turn)},
              {"tool_results", std::move(results)},
              {"dropped_tool_calls", s.dropped_tool_calls}};
}

TraceStep step_from_json(const Json& j) {
  TraceStep s;
  s.phase = parse_phase(j.at("phase").get<std::string>());
  // A turn with no text and no calls is legal in a trace (empty final reply)
  // but not in a script, so decode by hand.
  const Json& mt = j.at("model_turn");
  if (mt.contains("text") && !mt["text"].is_null()) s.model_turn.text = mt["text"].get<std::string>();
  if (mt.contains("tool_calls")) s.model_turn.tool_calls = mt["tool_calls"].get<std::vector<ToolInvocation>>();
  if (mt.contains("usage")) s.model_turn.usage = mt["usage"].get<TokenUsage>();
  for (const auto& jr : j.at("tool_results")) {
    ToolResult r;
    r.invocation = jr.at("invocation").get<ToolInvocation>();
    r.toolset = jr.value("toolset", "");
    r.observation = jr.value("observation", "");
    r.denied = jr.value("denied", false);
    if (jr.contains("exec")) r.exec = exec_from_json(jr["exec"]);
    if (jr.contains("outcome")) {
      const auto label = jr["outcome"].get<std::string>();
      r.outcome = parse_outcome_category(label);
      if (!r.outcome) throw Error(ErrorKind::kInvalidArgument, "unknown outcome label '" + label + "'");
    }
    s.tool_results.push_back(std::move(r));
  }
  s.dropped_tool_calls = j.value("dropped_tool_calls", std::size_t{0});
  return s;
}

}  // namespace

std::string trace_to_jsonl(const Trace& trace, bool include_timing) {
  std::string out;
  out += Json{{"type", "header"}, {"task_id", trace.task_id}, {"model", trace.model}, {"goal", trace.goal}}.dump();
  out += '\n';
  for (const auto& s : trace.steps) {
    out += step_to_json(s, include_timing).dump();
    out += '\n';
  }
  Json phases = Json::array();
  for (const auto& p : trace.phases) {
    phases.push_back({{"phase", std::string(to_string(p.phase))},
                      {"usage", usage_json(p.usage)},
                      {"cost_picodollars", p.cost.pico()},
                      {"tool_calls", p.tool_calls},
                      {"steps", p.steps}});
  }
  Json summary{{"type", "summary"},
               {"total_usage", usage_json(trace.total_usage)},
               {"total_cost_picodollars", trace.total_cost.pico()},
               {"total_cost_usd", trace.total_cost.to_string(6)},
               {"tool_call_count", trace.tool_call_count},
               {"final_message", trace.final_message},
               {"toolset_calls", trace.toolset_calls},
               {"termination", std::string(to_string(trace.termination))},
               {"fallback", trace.fallback},
               {"phases", std::move(phases)}};
  summary["error"] = trace.error ? Json(*trace.error) : Json(nullptr);
  if (trace.plan) summary["plan"] = {{"steps", trace.plan->steps}, {"raw", trace.plan->raw}};
  if (include_timing) summary["wall_clock_seconds"] = trace.wall_clock_seconds;
  out += summary.dump();
  out += '\n';
  return out;
}

Trace trace_from_jsonl(std::string_view text) {
  Trace trace;
  bool have_header = false;
  bool have_summary = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::kInvalidArgument, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      trace.task_id = j.value("task_id", "");
      trace.model = j.value("model", "");
      trace.goal = j.value("goal", "");
      have_header = true;
    } else if (type == "step") {
      try {
        trace.steps.push_back(step_from_json(j));
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::kInvalidArgument, "trace line " + std::to_string(line_no) + ": " + e.what());
      }
    } else if (type == "summary") {
      trace.total_usage = j.at("total_usage").get<TokenUsage>();
      trace.total_cost = Money::from_pico(j.at("total_cost_picodollars").get<std::int64_t>());
      trace.tool_call_count = j.at("tool_call_count").get<std::size_t>();
      trace.final_message = j.value("final_message", "");
      trace.toolset_calls = j.value("toolset_calls", std::map<std::string, std::size_t>{});
      trace.termination = parse_termination_reason(j.at("termination").get<std::string>());
      trace.fallback = j.value("fallback", false);
      if (j.contains("error") && !j["error"].is_null()) trace.error = j["error"].get<std::string>();
      if (j.contains("plan")) trace.plan = Plan{j["plan"].at("steps").get<std::vector<std::string>>(), j["plan"].value("raw", "")};
      trace.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
      for (const auto& p : j.value("phases", Json::array())) {
        trace.phases.push_back({parse_phase(p.at("phase").get<std::string>()), p.at("usage").get<TokenUsage>(),
                                Money::from_pico(p.at("cost_picodollars").get<std::int64_t>()),
                                p.at("tool_calls").get<std::size_t>(), p.at("steps").get<std::size_t>()});
      }
      have_summary = true;
    } else {
      throw Error(ErrorKind::kInvalidArgument, "trace line " + std::to_string(line_no) + ": unknown record type");
    }
  }
  if (!have_header || !have_summary) throw Error(ErrorKind::kInvalidArgument, "trace is missing its header or summary");
  return trace;
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << trace_to_jsonl(trace);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "no trace at " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_jsonl(buf.str());
}

std::string render_trace(const Trace& trace) {
  std::ostringstream out;
  out << "task: " << trace.task_id << "\n";
  out << "model: " << trace.model << "\n";
  if (!trace.goal.empty()) out << "goal: " << trace.goal << "\n";
  std::size_t call_no = 0;
  std::optional<Phase> current;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    if (!current || *current != s.phase) {
      if (s.phase != Phase::kSingle) out << "\n== " << to_string(s.phase) << " phase ==\n";
      current = s.phase;
    }
    out << "\n--- step " << (i + 1) << " (usage: " << s.model_turn.usage.input_tokens << " in / "
        << s.model_turn.usage.output_tokens << " out)\n";
    if (s.model_turn.text && !s.model_turn.text->empty()) out << "assistant: " << *s.model_turn.text << "\n";
    for (const auto& r : s.tool_results) {
      ++call_no;
      out << "[call " << call_no << "] " << r.toolset << "/" << r.invocation.tool_name << " "
          << r.invocation.arguments.dump() << "\n";
      out << "  outcome: " << (r.outcome ? std::string(to_string(*r.outcome)) : std::string("-"))
          << (r.denied ? " (denied)" : "") << "\n";
      std::istringstream obs(r.observation);
      std::string line;
      while (std::getline(obs, line)) out << "  | " << line << "\n";
    }
    if (s.dropped_tool_calls > 0) out << "  (" << s.dropped_tool_calls << " call(s) dropped: tool-call budget reached)\n";
  }
  out << "\n=== summary\n";
  out << "tool calls: " << trace.tool_call_count << "\n";
  for (const auto& [name, share] : trace.toolset_shares()) {
    out << "  " << name << ": " << trace.toolset_calls.at(name) << "\n";
  }
  out << "usage: " << trace.total_usage.input_tokens << " in / " << trace.total_usage.output_tokens << " out\n";
  out << "cost: $" << trace.total_cost.to_string(6) << "\n";
  out << "termination: " << to_string(trace.termination) << "\n";
  if (trace.fallback) out << "fallback: planner produced no plan; executor ran as a single agent\n";
  if (trace.error) out << "error: " << *trace.error << "\n";
  out << "final message: " << trace.final_message << "\n";
  return out.str();
}

}  // namespace starshell

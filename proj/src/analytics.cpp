#include "starshell/analytics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "starshell/error.hpp"
#include "starshell/metrics.hpp"
#include "starshell/report.hpp"

namespace starshell {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "missing " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::vector<TaskResult> all_tasks(const RunData& run) {
  std::vector<TaskResult> out;
  for (const auto& r : run.rows) out.insert(out.end(), r.tasks.begin(), r.tasks.end());
  return out;
}

std::string command_of(const ToolResult& r) {
  if (r.invocation.arguments.contains("command") && r.invocation.arguments["command"].is_string()) {
    return r.invocation.arguments["command"].get<std::string>();
  }
  return "";
}

template <typename Pred>
std::optional<std::size_t> first_call(const Trace& trace, Pred pred) {
  std::size_t index = 0;
  for (const auto& step : trace.steps) {
    for (const auto& r : step.tool_results) {
      ++index;
      if (pred(r)) return index;
    }
  }
  return std::nullopt;
}

}  // namespace

RunData load_run(const fs::path& dir) {
  RunData run;
  run.dir = dir;
  if (!fs::exists(dir / "manifest.json")) throw Error(ErrorKind::kNotFound, "no run at " + dir.string());
  run.manifest = Json::parse(slurp(dir / "manifest.json"));
  run.rows = parse_structured_report(slurp(dir / "report.json"));
  if (fs::exists(dir / "skills-events.jsonl")) {
    std::istringstream in(slurp(dir / "skills-events.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) run.skills.push_back(skills_record_from_json(Json::parse(line)));
    }
  }
  return run;
}

Trace load_task_trace(const RunData& run, const std::string& task_id) {
  for (const auto& t : run.manifest.value("tasks", Json::array())) {
    if (t.value("task_id", "") != task_id) continue;
    const std::string ref = t.value("trace", "");
    if (ref.empty()) throw Error(ErrorKind::kNotFound, "task '" + task_id + "' has no trace (" + t.value("status", "") + ")");
    return read_trace((run.dir / ref).string());
  }
  throw Error(ErrorKind::kNotFound, "no task '" + task_id + "' in run " + run.dir.string());
}

std::string analyze_histogram(const RunData& run, std::size_t cap) {
  const auto hist = tool_call_histogram(samples_from(all_tasks(run)), cap);
  std::ostringstream out;
  out << "| Tool calls | All | Success | Failure |\n|---:|---:|---:|---:|\n";
  for (const auto& [bin, count] : hist.at(Cohort::kAll)) {
    const auto& s = hist.at(Cohort::kSuccess);
    const auto& f = hist.at(Cohort::kFailure);
    out << "| " << bin << (bin == cap ? "+" : "") << " | " << count << " | " << (s.contains(bin) ? s.at(bin) : 0)
        << " | " << (f.contains(bin) ? f.at(bin) : 0) << " |\n";
  }
  return out.str();
}

std::string analyze_errors(const RunData& run) {
  const auto breakdown = error_breakdown(samples_from(all_tasks(run)));
  std::ostringstream out;
  out << "| Outcome | All (%) | Success (%) | Failure (%) |\n|---|---:|---:|---:|\n";
  for (const auto category : kAllOutcomeCategories) {
    out << "| " << to_string(category);
    for (const auto cohort : {Cohort::kAll, Cohort::kSuccess, Cohort::kFailure}) {
      out << " | " << fixed(breakdown.at(cohort).at(category) * 100.0, 1);
    }
    out << " |\n";
  }
  return out.str();
}

std::string analyze_skills_growth(const RunData& run) {
  if (run.skills.empty()) throw Error(ErrorKind::kNotFound, "run has no skills events (skills were not enabled)");
  std::ostringstream out;
  out << "| # | Task | Success | Cumulative successes | Skill files | Skills (KB) | Events |\n";
  out << "|---:|---|---|---:|---:|---:|---|\n";
  std::size_t cumulative = 0;
  for (const auto& r : run.skills) {
    cumulative += r.success ? 1 : 0;
    std::string events;
    for (const auto& e : r.events) events += (events.empty() ? "" : ", ") + e.type + " " + e.path;
    out << "| " << (r.index + 1) << " | " << r.task_id << " | " << (r.success ? "yes" : "no") << " | " << cumulative
        << " | " << r.file_count << " | " << fixed(r.total_kilobytes, 2) << " | " << (events.empty() ? "-" : events)
        << " |\n";
  }
  return out.str();
}

std::string analyze_oracle(const RunData& a, const RunData& b) {
  auto outcomes = [](const RunData& run) {
    std::map<std::string, bool> m;
    for (const auto& t : all_tasks(run)) {
      if (t.scored()) m[t.task_id] = t.success();
    }
    return m;
  };
  const auto u = oracle_union(outcomes(a), outcomes(b));
  std::ostringstream out;
  out << "| n | Both | Only A | Only B | Neither | SR A (%) | SR B (%) | Oracle SR (%) |\n";
  out << "|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  out << "| " << u.n << " | " << u.both << " | " << u.only_a << " | " << u.only_b << " | " << u.neither << " | "
      << fixed(u.sr_a * 100.0, 1) << " | " << fixed(u.sr_b * 100.0, 1) << " | " << fixed(u.sr_oracle * 100.0, 1)
      << " |\n";
  return out.str();
}

std::optional<std::size_t> first_skills_access(const Trace& trace) {
  return first_call(trace, [](const ToolResult& r) {
    const std::string cmd = command_of(r);
    return r.toolset == "terminal" && cmd.find("skills") != std::string::npos;
  });
}

std::optional<std::size_t> first_platform_call(const Trace& trace) {
  return first_call(trace, [](const ToolResult& r) {
    if (r.toolset == "registry") return true;
    const std::string cmd = command_of(r);
    return cmd.find("INSTANCE_URL") != std::string::npos || cmd.find("curl") != std::string::npos;
  });
}

}  // namespace starshell

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starshell/agent.hpp"
#include "starshell/platform.hpp"
#include "starshell/results.hpp"
#include "starshell/sandbox.hpp"
#include "starshell/suite.hpp"

namespace starshell {

enum class ProviderKind { kScripted, kLive };
std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view text);

struct RunOptions {
  AgentConfig config;
  ProviderKind provider = ProviderKind::kScripted;
  std::optional<std::filesystem::path> docs_dir;
  // Persistent skills root; enables the skills feature. Forces sequential runs.
  std::optional<std::filesystem::path> skills_dir;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  PricingTable pricing;
  ExecLimits limits;
  // Overrides the provider per task (tests, embedding). Takes precedence
  // over `provider`.
  std::function<std::unique_ptr<Provider>(const TaskInstance&)> provider_factory;
};

// Row label for reports: paradigm plus features plus orchestration.
std::string agent_label(const AgentConfig& config);

// The platform a task runs against: served over loopback, reset per task.
struct TaskEnvironment {
  Platform& platform;
  std::string instance_url;
  const Snapshot& snapshot;
};

struct TaskRun {
  TaskResult result;
  std::optional<Trace> trace;
};

// reset -> pre-check (every check must fail) -> episode -> post-check.
TaskRun run_task(const TaskInstance& task, const PlatformProfile& profile, TaskEnvironment& env, Provider& provider,
                 const RunOptions& options);

// One line per task of skills-events.jsonl.
struct SkillsEvent {
  std::string type;  // created | updated | promoted | regression | deleted
  std::string path;
};
struct SkillsTaskRecord {
  std::size_t index = 0;
  std::string task_id;
  bool success = false;
  std::vector<SkillsEvent> events;
  std::size_t file_count = 0;
  std::uint64_t total_bytes = 0;
  double total_kilobytes = 0.0;
};
Json to_json(const SkillsTaskRecord& r);
SkillsTaskRecord skills_record_from_json(const Json& j);

struct RunOutcome {
  SuiteResult result;
  std::filesystem::path run_dir;
  std::vector<std::string> artifacts;  // relative to run_dir
  std::vector<SkillsTaskRecord> skills;
  // 0 iff no task hit an environment failure.
  int exit_code = 0;
};

// Runs every task and writes the run directory: manifest.json, traces/,
// report.md, report.json, timing.json and, with skills on, skills-events.jsonl.
RunOutcome run_suite(const Suite& suite, const RunOptions& options);

}  // namespace starshell

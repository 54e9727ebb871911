#include "starshell/runner.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "starshell/error.hpp"
#include "starshell/http_provider.hpp"
#include "starshell/metrics.hpp"
#include "starshell/platform_service.hpp"
#include "starshell/report.hpp"
#include "starshell/skills.hpp"
#include "starshell/toolset.hpp"

namespace starshell {

namespace fs = std::filesystem;

std::string_view to_string(ProviderKind kind) { return kind == ProviderKind::kLive ? "live" : "scripted"; }

ProviderKind parse_provider_kind(std::string_view text) {
  if (text == "scripted") return ProviderKind::kScripted;
  if (text == "live") return ProviderKind::kLive;
  throw Error(ErrorKind::kInvalidArgument, "provider must be 'scripted' or 'live', got '" + std::string(text) + "'");
}

std::string agent_label(const AgentConfig& config) {
  std::string label(to_string(config.paradigm));
  if (config.features.docs) label += "+docs";
  if (config.features.skills) label += "+skills";
  if (config.orchestration == Orchestration::kPlannerExecutor) label += " (planner_executor)";
  return label;
}

namespace {

bool service_healthy(const std::string& url) {
  httplib::Client client(url);
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(5, 0);
  const auto res = client.Get("/health");
  return res && res->status == 200;
}

std::vector<std::unique_ptr<Toolset>> make_toolsets(Paradigm paradigm, const Sandbox& sandbox, Platform& platform) {
  std::vector<std::unique_ptr<Toolset>> out;
  if (paradigm == Paradigm::kTerminal || paradigm == Paradigm::kHybrid) {
    out.push_back(std::make_unique<TerminalToolset>(sandbox));
  }
  if (paradigm == Paradigm::kToolRegistry || paradigm == Paradigm::kHybrid) {
    out.push_back(make_platform_registry(platform));
  }
  if (paradigm == Paradigm::kWebAdapter) {
    throw Error(ErrorKind::kInvalidConfig, "the web adapter has no built-in implementation; supply a web toolset");
  }
  return out;
}

std::vector<CheckResult> evaluate_all(const TaskInstance& task, const Platform& platform, std::string_view message) {
  std::vector<CheckResult> out;
  for (const auto& c : task.checks) out.push_back(evaluate_check(c, platform, message));
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

struct SkillFile {
  std::string content;
  std::string status;  // verified | unverified | invalid
};

std::map<std::string, SkillFile> scan_skills(const fs::path& root) {
  std::map<std::string, SkillFile> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".md") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    SkillFile f{buf.str(), "invalid"};
    try {
      f.status = std::string(to_string(parse_skill(f.content).status));
    } catch (const Error&) {
    }
    out[fs::relative(entry.path(), root).generic_string()] = std::move(f);
  }
  return out;
}

std::vector<SkillsEvent> diff_skills(const std::map<std::string, SkillFile>& before,
                                     const std::map<std::string, SkillFile>& after) {
  std::vector<SkillsEvent> events;
  for (const auto& [path, f] : after) {
    const auto it = before.find(path);
    if (it == before.end()) {
      events.push_back({"created", path});
      continue;
    }
    if (it->second.status != "verified" && f.status == "verified") events.push_back({"promoted", path});
    if (it->second.status == "verified" && f.status != "verified") events.push_back({"regression", path});
    if (it->second.content != f.content) events.push_back({"updated", path});
  }
  for (const auto& [path, f] : before) {
    if (!after.contains(path)) events.push_back({"deleted", path});
  }
  return events;
}

std::unique_ptr<Provider> provider_for(const TaskInstance& task, const RunOptions& options) {
  if (options.provider_factory) return options.provider_factory(task);
  if (options.provider == ProviderKind::kLive) return std::make_unique<HttpChatProvider>(HttpProviderConfig::from_env());
  // A task without a script gets an empty one: the agent answers at once.
  const auto path = script_for(task, options.config);
  if (!path) return make_scripted(TurnScript{{}, ExhaustionPolicy::kFinalMessage});
  return make_scripted(TurnScript::load(path->string()));
}

}  // namespace

Json to_json(const SkillsTaskRecord& r) {
  Json events = Json::array();
  for (const auto& e : r.events) events.push_back({{"type", e.type}, {"path", e.path}});
  return Json{{"index", r.index},           {"task_id", r.task_id},         {"success", r.success},
              {"events", events},           {"file_count", r.file_count},   {"total_bytes", r.total_bytes},
              {"total_kilobytes", r.total_kilobytes}};
}

SkillsTaskRecord skills_record_from_json(const Json& j) {
  SkillsTaskRecord r;
  r.index = j.at("index").get<std::size_t>();
  r.task_id = j.at("task_id").get<std::string>();
  r.success = j.value("success", false);
  for (const auto& e : j.value("events", Json::array())) r.events.push_back({e.at("type"), e.at("path")});
  r.file_count = j.at("file_count").get<std::size_t>();
  r.total_bytes = j.at("total_bytes").get<std::uint64_t>();
  r.total_kilobytes = j.at("total_kilobytes").get<double>();
  return r;
}

TaskRun run_task(const TaskInstance& task, const PlatformProfile& base_profile, TaskEnvironment& env,
                 Provider& provider, const RunOptions& options) {
  TaskRun run;
  TaskResult& result = run.result;
  result.task_id = task.id;
  result.category = task.category;
  result.kind = task.kind;

  env.platform.reset(env.snapshot);
  if (env.platform.state_digest() != env.snapshot.digest) {
    result.status = TaskStatus::kEnvironmentFailure;
    result.error = "reset did not restore the fixture snapshot";
    return run;
  }
  std::vector<CheckResult> pre;
  try {
    pre = evaluate_all(task, env.platform, "");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInvalidTask) throw;
    result.status = TaskStatus::kInvalidTask;
    result.error = e.what();
    return run;
  }
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i].passed) {
      result.status = TaskStatus::kInvalidTask;
      result.checks = pre;
      result.error = "check " + std::to_string(i + 1) + " (" + std::string(to_string(task.checks[i].kind)) +
                     ") passes before the agent acts: " + pre[i].detail;
      return run;
    }
  }
  if (!service_healthy(env.instance_url)) {
    result.status = TaskStatus::kEnvironmentFailure;
    result.error = "platform unreachable at " + env.instance_url;
    return run;
  }

  PlatformProfile profile = base_profile;
  profile.instance_url = env.instance_url;
  SandboxSetup setup;
  setup.env = {{"INSTANCE_URL", env.instance_url}, {profile.auth_env_var, auth_header_flags(profile.auth)}};
  if (options.config.features.skills && options.skills_dir) setup.skills_root = options.skills_dir;
  if (options.config.features.docs && options.docs_dir) setup.docs_root = options.docs_dir;
  setup.limits = options.limits;
  Sandbox sandbox(setup);

  auto owned = make_toolsets(options.config.paradigm, sandbox, env.platform);
  std::vector<Toolset*> toolsets;
  for (auto& t : owned) toolsets.push_back(t.get());

  const EpisodeRequest request{task.id, task.goal, options.config, profile};
  Trace trace = run_agent(request, toolsets, provider, options.pricing);

  try {
    result.checks = evaluate_all(task, env.platform, trace.final_message);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInvalidTask) throw;
    result.status = TaskStatus::kInvalidTask;
    result.error = e.what();
    run.trace = std::move(trace);
    return run;
  }
  const bool all_pass =
      std::all_of(result.checks.begin(), result.checks.end(), [](const CheckResult& c) { return c.passed; });
  result.status = all_pass ? TaskStatus::kSuccess : TaskStatus::kFailure;
  result.cost = trace.total_cost;
  result.tool_calls = trace.tool_call_count;
  result.wall_clock_seconds = trace.wall_clock_seconds;
  result.termination = std::string(to_string(trace.termination));
  if (trace.error) result.error = *trace.error;
  for (const auto& step : trace.steps) {
    for (const auto& r : step.tool_results) {
      if (r.outcome) result.outcomes.push_back(*r.outcome);
    }
  }
  run.trace = std::move(trace);
  return run;
}

RunOutcome run_suite(const Suite& suite, const RunOptions& input) {
  RunOptions options = input;
  options.config.features.docs = options.docs_dir.has_value();
  options.config.features.skills = options.skills_dir.has_value();
  if (options.jobs == 0) throw Error(ErrorKind::kInvalidArgument, "--jobs must be at least 1");
  if (options.config.features.skills && options.jobs > 1) {
    throw Error(ErrorKind::kInvalidArgument, "skills runs are sequential; use --jobs 1");
  }
  if (options.provider == ProviderKind::kLive && !options.provider_factory) HttpProviderConfig::from_env();
  if (options.pricing.find(options.config.model) == nullptr) {
    throw Error(ErrorKind::kUnknownModel, "no pricing for model '" + options.config.model + "'");
  }
  if (options.skills_dir) {
    fs::create_directories(*options.skills_dir);
    options.skills_dir = fs::canonical(*options.skills_dir);
  }
  if (options.docs_dir) options.docs_dir = fs::canonical(*options.docs_dir);

  const PlatformProfile profile = platform_profile(suite.profile);
  const std::string started = utc_timestamp();

  // Seed every fixture once; tasks reset to these snapshots.
  std::map<std::string, Snapshot> snapshots;
  for (const auto& [name, path] : suite.fixtures) {
    Platform seeder(profile.auth);
    snapshots.emplace(name, seeder.seed(load_fixture(path.string())));
  }

  RunOutcome outcome;
  outcome.run_dir = options.out_dir;
  fs::create_directories(outcome.run_dir / "traces");

  std::vector<TaskRun> runs(suite.tasks.size());
  std::vector<SkillsTaskRecord> skills_records;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    try {
      Platform platform(profile.auth);
      PlatformService service(platform);
      for (std::size_t i = next++; i < suite.tasks.size(); i = next++) {
        const TaskInstance& task = suite.tasks[i];
        TaskEnvironment env{platform, service.base_url(), snapshots.at(task.fixture)};
        std::map<std::string, SkillFile> before;
        if (options.skills_dir) before = scan_skills(*options.skills_dir);
        auto provider = provider_for(task, options);
        runs[i] = run_task(task, profile, env, *provider, options);
        if (options.skills_dir) {
          SkillStore store(*options.skills_dir);
          const SkillStats stats = store.stats();
          skills_records.push_back({i, task.id, runs[i].result.success(),
                                    diff_skills(before, scan_skills(*options.skills_dir)), stats.file_count,
                                    stats.total_bytes, stats.total_kilobytes});
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!failure) failure = std::current_exception();
      next = suite.tasks.size();
    }
  };

  const std::size_t n_workers = std::min(options.jobs, std::max<std::size_t>(suite.tasks.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SuiteResult& result = outcome.result;
  result.suite = suite.name;
  result.platform = profile.id;
  result.agent = agent_label(options.config);
  Json timing_tasks = Json::object();
  for (auto& run : runs) {
    if (run.trace) {
      const std::string ref = "traces/" + run.result.task_id + ".jsonl";
      write_trace(*run.trace, (outcome.run_dir / ref).string());
      run.result.trace_ref = ref;
      outcome.artifacts.push_back(ref);
    }
    timing_tasks[run.result.task_id] = run.result.wall_clock_seconds;
    if (run.result.status == TaskStatus::kEnvironmentFailure) outcome.exit_code = 1;
    result.tasks.push_back(run.result);
  }
  result.aggregates = compute_aggregates(result.tasks);
  outcome.skills = skills_records;

  write_file(outcome.run_dir / "report.md", emit_report({result}, ReportFormat::kMarkdown));
  write_file(outcome.run_dir / "report.json", emit_report({result}, ReportFormat::kStructured));
  write_file(outcome.run_dir / "timing.json",
             Json{{"mean_wall_clock_seconds", result.aggregates.mean_wall_clock_seconds}, {"tasks", timing_tasks}}.dump(2) +
                 "\n");
  outcome.artifacts.insert(outcome.artifacts.end(), {"report.md", "report.json", "timing.json"});
  if (options.skills_dir) {
    std::string lines;
    for (const auto& r : skills_records) lines += to_json(r).dump() + "\n";
    write_file(outcome.run_dir / "skills-events.jsonl", lines);
    outcome.artifacts.push_back("skills-events.jsonl");
  }

  Json digests = Json::object();
  for (const auto& [name, snap] : snapshots) digests[name] = snap.digest;
  Json tasks = Json::array();
  for (const auto& t : result.tasks) {
    tasks.push_back({{"task_id", t.task_id}, {"status", std::string(to_string(t.status))}, {"trace", t.trace_ref}});
  }
  const Json manifest{
      {"run_id", suite.name + "-" + started},
      {"suite", suite.name},
      {"suite_path", suite.source.string()},
      {"platform", profile.id},
      {"agent",
       {{"paradigm", std::string(to_string(options.config.paradigm))},
        {"orchestration", std::string(to_string(options.config.orchestration))},
        {"docs", options.config.features.docs},
        {"skills", options.config.features.skills},
        {"max_tool_calls", options.config.max_tool_calls},
        {"model", options.config.model},
        {"label", result.agent}}},
      {"provider", options.provider_factory ? "custom" : std::string(to_string(options.provider))},
      {"fixture_digests", digests},
      {"started", started},
      {"finished", utc_timestamp()},
      {"jobs", options.jobs},
      {"tasks", tasks},
      {"artifacts", outcome.artifacts},
      {"exit_code", outcome.exit_code}};
  write_file(outcome.run_dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

}  // namespace starshell

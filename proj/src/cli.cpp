#include "starshell/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "starshell/analytics.hpp"
#include "starshell/error.hpp"
#include "starshell/platform_service.hpp"
#include "starshell/runner.hpp"

namespace starshell {
namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

int serve(const std::string& fixture_path, int port, const std::string& profile_id, std::ostream& out) {
  const PlatformProfile profile = platform_profile(profile_id);
  Platform platform(profile.auth);
  const Snapshot snap = platform.seed(load_fixture(fixture_path));
  PlatformService service(platform, port);

  g_stop = false;
  struct sigaction sa {};
  sa.sa_handler = on_signal;
  sigemptyset(&sa.sa_mask);
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);

  out << "serving fixture '" << snap.fixture_name << "' at " << service.base_url() << "\n"
      << "digest " << snap.digest << "\n"
      << "auth header: " << profile.auth.header_name << ": " << profile.auth.header_value << "\n";
  out.flush();
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  out << "stopped\n";
  return 0;
}

Paradigm parse_agent(const std::string& s) {
  if (s == "terminal") return Paradigm::kTerminal;
  if (s == "tools") return Paradigm::kToolRegistry;
  if (s == "hybrid") return Paradigm::kHybrid;
  throw Error(ErrorKind::kInvalidArgument, "--agent must be terminal, tools or hybrid");
}

Orchestration parse_orchestration(const std::string& s) {
  if (s == "single") return Orchestration::kSingle;
  if (s == "planner_executor") return Orchestration::kPlannerExecutor;
  throw Error(ErrorKind::kInvalidArgument, "--orchestration must be single or planner_executor");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"starshell: runtime and benchmark harness for terminal-based enterprise agents", "starshell"};
  app.set_config("--config", "", "TOML/INI file with flag values");
  app.require_subcommand(1);

  // platform serve
  auto* platform_cmd = app.add_subcommand("platform", "Mock enterprise platform");
  platform_cmd->require_subcommand(1);
  auto* serve_cmd = platform_cmd->add_subcommand("serve", "Serve a fixture over HTTP on 127.0.0.1");
  std::string fixture;
  int port = 8080;
  std::string profile = "servicenow";
  serve_cmd->add_option("--fixture", fixture, "Fixture JSON file")->required();
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  serve_cmd->add_option("--profile", profile, "servicenow | erpnext (auth header)");

  // bench run
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark runs");
  bench_cmd->require_subcommand(1);
  auto* run_cmd = bench_cmd->add_subcommand("run", "Run a task suite");
  std::string suite_path;
  std::string agent = "terminal";
  std::string orchestration = "single";
  std::string provider = "scripted";
  std::optional<std::string> docs;
  std::optional<std::string> skills;
  std::string out_dir;
  std::size_t jobs = 1;
  std::optional<std::string> pricing_path;
  std::string model = "scripted-model";
  std::size_t max_tool_calls = 50;
  int timeout_seconds = 30;
  run_cmd->add_option("--suite", suite_path, "Suite JSON file")->required();
  run_cmd->add_option("--agent", agent, "terminal | tools | hybrid");
  run_cmd->add_option("--orchestration", orchestration, "single | planner_executor");
  run_cmd->add_option("--provider", provider, "scripted | live (PROVIDER_BASE_URL, PROVIDER_API_KEY)");
  run_cmd->add_option("--docs", docs, "Documentation directory mounted as docs/");
  run_cmd->add_option("--skills", skills, "Skills directory mounted as skills/ (default <out-dir>/skills)")
      ->expected(0, 1);
  run_cmd->add_option("--out-dir", out_dir, "Run directory")->required();
  run_cmd->add_option("--jobs", jobs, "Parallel tasks (skills off only)");
  run_cmd->add_option("--pricing", pricing_path, "Pricing file: <model> <in $/Mtok> <out $/Mtok> per line");
  run_cmd->add_option("--model", model, "Model id");
  run_cmd->add_option("--max-tool-calls", max_tool_calls, "Tool-call budget per episode");
  run_cmd->add_option("--timeout", timeout_seconds, "Per-command timeout in seconds");

  // trace show
  auto* trace_cmd = app.add_subcommand("trace", "Inspect traces");
  trace_cmd->require_subcommand(1);
  auto* show_cmd = trace_cmd->add_subcommand("show", "Render one task's episode");
  std::string trace_run;
  std::string task_id;
  show_cmd->add_option("--run", trace_run, "Run directory")->required();
  show_cmd->add_option("--task", task_id, "Task id")->required();

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Aggregates over run directories");
  std::vector<std::string> runs;
  std::string what;
  std::size_t cap = 50;
  analyze_cmd->add_option("--run", runs, "Run directory (twice for oracle)")->required();
  analyze_cmd->add_option("--what", what, "histogram | errors | skills-growth | oracle")->required();
  analyze_cmd->add_option("--cap", cap, "Histogram cap");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*serve_cmd) return serve(fixture, port, profile, out);

    if (*run_cmd) {
      RunOptions options;
      options.config.paradigm = parse_agent(agent);
      options.config.orchestration = parse_orchestration(orchestration);
      options.config.model = model;
      options.config.max_tool_calls = max_tool_calls;
      options.provider = parse_provider_kind(provider);
      options.out_dir = out_dir;
      options.jobs = jobs;
      options.limits.timeout = std::chrono::milliseconds(static_cast<long>(timeout_seconds) * 1000);
      if (docs) options.docs_dir = *docs;
      if (run_cmd->count("--skills") > 0) {
        options.skills_dir = skills && !skills->empty() ? std::filesystem::path(*skills)
                                                        : std::filesystem::path(out_dir) / "skills";
      }
      options.pricing = pricing_path ? PricingTable::load(*pricing_path) : PricingTable::parse(kDefaultPricing);
      const Suite suite = load_suite(suite_path);
      const RunOutcome outcome = run_suite(suite, options);
      std::ifstream report(outcome.run_dir / "report.md");
      out << report.rdbuf();
      out << "\nrun directory: " << outcome.run_dir.string() << "\n";
      if (outcome.exit_code != 0) err << "environment failures occurred; see report.json\n";
      return outcome.exit_code;
    }

    if (*show_cmd) {
      const RunData run = load_run(trace_run);
      const Trace trace = load_task_trace(run, task_id);
      for (const auto& row : run.rows) {
        for (const auto& t : row.tasks) {
          if (t.task_id == task_id) out << "status: " << to_string(t.status) << "\n";
        }
      }
      out << render_trace(trace);
      return 0;
    }

    if (*analyze_cmd) {
      if (what == "oracle") {
        if (runs.size() != 2) throw Error(ErrorKind::kInvalidArgument, "oracle needs exactly two --run directories");
        out << analyze_oracle(load_run(runs[0]), load_run(runs[1]));
        return 0;
      }
      if (runs.size() != 1) throw Error(ErrorKind::kInvalidArgument, what + " takes exactly one --run directory");
      const RunData run = load_run(runs[0]);
      if (what == "histogram") out << analyze_histogram(run, cap);
      else if (what == "errors") out << analyze_errors(run);
      else if (what == "skills-growth") out << analyze_skills_growth(run);
      else throw Error(ErrorKind::kInvalidArgument, "--what must be histogram, errors, skills-growth or oracle");
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace starshell

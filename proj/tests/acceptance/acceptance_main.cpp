// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "query_oracle.hpp"
#include "starshell/agent.hpp"
#include "starshell/analytics.hpp"
#include "starshell/error.hpp"
#include "starshell/metrics.hpp"
#include "starshell/outcome.hpp"
#include "starshell/platform.hpp"
#include "starshell/platform_service.hpp"
#include "starshell/runner.hpp"
#include "starshell/skills.hpp"
#include "starshell/suite.hpp"
#include "starshell/toolset.hpp"
#include "temp_dir.hpp"

using namespace starshell;
namespace fs = std::filesystem;
using testing_support::slurp;
using testing_support::TempDir;

namespace {

const std::string kData = STARSHELL_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << name;
  if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
  std::cout << std::endl;
}

std::string fmt(double v, int decimals = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(decimals);
  s << v;
  return s.str();
}

RunOptions scripted_options(const fs::path& out) {
  RunOptions o;
  o.out_dir = out;
  o.pricing = PricingTable::parse("scripted-model 3.00 15.00\n");
  return o;
}

// ---------------------------------------------------------------------------

Outcome se_reproduction() {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Outcome o;
  const std::vector<std::pair<std::size_t, double>> cases = {{330, 2.2}, {192, 2.9}, {207, 2.8}, {729, 1.5}};
  for (const auto& [n, target_pp] : cases) {
    const double pp = 100.0 * sample_proportion_se(0.8, n);
    const Dec exact = 100 * boost::multiprecision::sqrt(Dec("0.8") * Dec("0.2") / Dec(n));
    o.expect(std::fabs(pp - exact.convert_to<double>()) < 1e-9, "n=" + std::to_string(n) + " disagrees with oracle");
    o.expect(std::fabs(pp - target_pp) <= 0.05 + 1e-12,
             "n=" + std::to_string(n) + " gives " + fmt(pp) + " pp, expected " + fmt(target_pp, 1));
  }
  // With an integral success count the two entry points agree.
  o.expect(success_rate_se(264, 330).se == sample_proportion_se(0.8, 330), "success_rate_se(264, 330) mismatch");
  return o;
}

Outcome oracle_reproduction() {
  Outcome o;
  std::map<std::string, bool> terminal;
  std::map<std::string, bool> web;
  const auto add = [&](std::size_t count, bool t, bool w) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string id = "task-" + std::to_string(terminal.size());
      terminal[id] = t;
      web[id] = w;
    }
  };
  add(187, true, true);
  add(55, true, false);
  add(52, false, true);
  add(330 - 187 - 55 - 52, false, false);
  const OracleUnion u = oracle_union(terminal, web);
  const double pct = 100.0 * u.sr_oracle;
  o.expect(u.n == 330 && u.both == 187 && u.only_a == 55 && u.only_b == 52, "partition miscounted");
  o.expect(std::fabs(pct - 89.1) <= 0.1, "oracle SR " + fmt(pct) + "%");
  return o;
}

Outcome classifier_fidelity() {
  struct Row {
    std::string observation;
    ExecFlags flags;
    OutcomeCategory expected;
  };
  const std::vector<Row> rows = {
      {R"({"result": {"sys_id": "a1b2", "number": "INC001"}})", {}, OutcomeCategory::kSuccess},
      {R"({"result": [{"sys_id": "a1b2"}, {"sys_id": "c3d4"})" + std::string(kTruncationMarker), {},
       OutcomeCategory::kSuccessTruncated},
      {"number: INC0000039 state: 6", {}, OutcomeCategory::kNonJsonSuccess},
      {R"({"error": {"detail": "The payload is not valid JSON."}, "status": "failure"})", {},
       OutcomeCategory::kApiError},
      {"/bin/sh: Syntax error: \"}\" unexpected\n[exit code: 2]", {2, false}, OutcomeCategory::kShellError},
      {"[no output]", {}, OutcomeCategory::kEmptyResponse},
      {"curl: (2) no URL specified\n[exit code: 2]", {2, false}, OutcomeCategory::kCurlError},
      {"parse error: Invalid literal at line 1\n[exit code: 4]", {4, false}, OutcomeCategory::kJsonParseError},
      {"json.decoder.JSONDecodeError: Expecting value\n[exit code: 1]", {1, false}, OutcomeCategory::kPythonError},
      {"[error] Command timed out after 30s.", {kTimeoutExitCode, true}, OutcomeCategory::kTimeout},
      {"<html><head><meta http-equiv=\"refresh\" content=\"0;url=/login.do\"></head></html>", {},
       OutcomeCategory::kHtmlRedirect},
  };
  Outcome o;
  std::size_t hits = 0;
  for (const auto& r : rows) {
    const auto got = classify_outcome(r.observation, r.flags);
    if (got == r.expected) ++hits;
    else o.expect(false, std::string(to_string(r.expected)) + " classified as " + std::string(to_string(got)));
  }
  o.detail = std::to_string(hits) + "/11" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome query_equivalence() {
  Outcome o;
  std::mt19937_64 rng(0x5eed);
  std::size_t matched = 0;
  std::size_t records = 0;
  for (int i = 0; i < 1000; ++i) {
    const Table t = oracle::random_table(rng, 200);
    records = std::max(records, t.records.size());
    const std::string q = oracle::random_query(rng);
    const auto expected = oracle::run(q, t);
    const auto actual = evaluate_query(parse_query(q), t);
    if (oracle::same(expected, actual)) ++matched;
    else o.expect(false, "mismatch on '" + q + "'");
    if (!o.pass) break;
  }
  o.expect(records <= 200, "fixture too large");
  if (o.pass) o.detail = std::to_string(matched) + "/1000 cases";
  return o;
}

Outcome reset_contract() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::size_t fixtures = 0;
  for (const auto& entry : fs::directory_iterator(kData + "/fixtures")) {
    if (entry.path().extension() != ".json") continue;
    ++fixtures;
    Platform p;
    const Snapshot snap = p.seed(load_fixture(entry.path().string()));
    const auto tables = p.table_names();
    std::size_t ops = 0;
    while (ops < 60) {
      const std::string table = tables[rng() % tables.size()];
      const auto rows = p.query(table, {});
      const auto schema = p.schema(table);
      const std::string field = schema.fields.empty() ? "sys_id" : schema.fields[rng() % schema.fields.size()].name;
      switch (rng() % 4) {
        case 0: p.create(table, {{field, "burst-" + std::to_string(ops)}}); break;
        case 1:
          if (!rows.empty()) p.update(table, rows[rng() % rows.size()].sys_id, {{field, "changed"}});
          break;
        case 2:
          if (!rows.empty()) p.remove(table, rows[rng() % rows.size()].sys_id);
          break;
        default: {
          HttpRequest r;
          r.method = "POST";
          r.path = "/api/now/table/" + table;
          r.headers = {{p.auth().header_name, p.auth().header_value}};
          r.body = Json{{field, "via-http"}}.dump();
          p.handle_request(r);
        }
      }
      ++ops;
    }
    o.expect(p.state_digest() != snap.digest, entry.path().filename().string() + ": burst did not change state");
    p.reset(snap);
    o.expect(p.state_digest() == snap.digest, entry.path().filename().string() + ": digest differs after reset");
    o.expect(p.snapshot().state == snap.state, entry.path().filename().string() + ": state differs after reset");
  }
  o.expect(fixtures >= 2, "expected at least two shipped fixtures");

  std::size_t tasks = 0;
  for (const auto& entry : fs::directory_iterator(kData + "/suites")) {
    const Suite suite = load_suite(entry.path());
    for (const auto& task : suite.tasks) {
      ++tasks;
      Platform p;
      p.seed(load_fixture(suite.fixtures.at(task.fixture).string()));
      for (const auto& check : task.checks) {
        o.expect(!evaluate_check(check, p, "").passed, task.id + ": a check passes on the fresh snapshot");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(fixtures) + " fixtures, " + std::to_string(tasks) + " tasks pre-checked";
  return o;
}

// Cost of a whole script, straight from the JSON: $3 / $15 per million
// tokens is 3e6 / 15e6 picodollars per token.
std::int64_t script_cost_pico(const fs::path& script) {
  const Json j = Json::parse(slurp(script));
  std::int64_t pico = 0;
  for (const auto& turn : j.at("turns")) {
    pico += turn.at("usage").at("input_tokens").get<std::int64_t>() * 3'000'000;
    pico += turn.at("usage").at("output_tokens").get<std::int64_t>() * 15'000'000;
  }
  return pico;
}

Outcome e2e_benchmark() {
  Outcome o;
  TempDir dir;
  const Suite suite = load_suite(kData + "/suites/itsm-e2e.json");
  const RunOutcome first = run_suite(suite, scripted_options(dir / "run1"));
  const RunOutcome second = run_suite(suite, scripted_options(dir / "run2"));

  const std::vector<int> expected = {1, 0, 1, 1, 1, 0, 1, 1, 1, 0};
  std::vector<int> got;
  std::string vector_text;
  for (const auto& t : first.result.tasks) {
    got.push_back(t.success() ? 1 : 0);
    vector_text += t.success() ? '1' : '0';
  }
  o.expect(got == expected, "outcome vector " + vector_text);

  const auto& a = first.result.aggregates;
  std::int64_t cost = 0;
  std::size_t calls = 0;
  for (const auto& task : suite.tasks) {
    if (task.script) cost += script_cost_pico(*task.script);
  }
  for (const auto& t : first.result.tasks) calls += t.tool_calls;
  o.expect(a.n == 10 && a.successes == 7, "n/successes " + std::to_string(a.n) + "/" + std::to_string(a.successes));
  o.expect(std::fabs(a.sr - 0.7) < 1e-12, "SR " + fmt(a.sr));
  o.expect(std::fabs(a.se - std::sqrt(0.7 * 0.3 / 10.0)) < 1e-12, "SE " + fmt(a.se, 6));
  o.expect(a.total_cost.pico() == cost, "total cost " + a.total_cost.to_string(6) + " vs " +
                                            Money::from_pico(cost).to_string(6));
  o.expect(a.total_tool_calls == calls, "tool calls");
  // Mean cost rounded half-up to cents, computed on integers.
  const std::int64_t mean_pico = cost / 10;
  const std::int64_t cents = (mean_pico + 5'000'000'000) / 10'000'000'000;
  std::ostringstream expect_cost;
  expect_cost << cents / 100 << "." << (cents % 100 < 10 ? "0" : "") << cents % 100;
  o.expect(a.mean_cost_string(2) == expect_cost.str(), "mean cost " + a.mean_cost_string(2));

  o.expect(slurp(dir / "run1/report.md") == slurp(dir / "run2/report.md"), "report.md differs between runs");
  o.expect(slurp(dir / "run1/report.json") == slurp(dir / "run2/report.json"), "report.json differs between runs");
  o.expect(!slurp(dir / "run1/report.md").empty(), "report.md empty");
  if (o.pass) o.detail = "vector " + vector_text + ", SR 70.0%, cost $" + a.total_cost.to_string(4);
  return o;
}

Outcome skills_lifecycle() {
  Outcome o;
  TempDir dir;
  const Suite suite = load_suite(kData + "/suites/itsm-skills.json");
  RunOptions opts = scripted_options(dir / "run");
  opts.skills_dir = dir / "skills";
  const std::string skill = "servicenow/create-incident.md";

  // Status as seen before each task starts, then once more at the end.
  std::vector<int> status;
  const auto observe = [&]() {
    SkillStore store(dir / "skills");
    try {
      status.push_back(store.load(skill).status == SkillStatus::kVerified ? 2 : 1);
    } catch (const Error&) {
      status.push_back(0);
    }
  };
  opts.provider_factory = [&](const TaskInstance& task) -> std::unique_ptr<Provider> {
    observe();
    AgentConfig c;
    c.features.skills = true;
    return make_scripted(TurnScript::load(script_for(task, c)->string()));
  };
  const RunOutcome run = run_suite(suite, opts);
  observe();

  o.expect(status == std::vector<int>({0, 1, 2, 2}), "status sequence mismatch");
  o.expect(std::is_sorted(status.begin(), status.end()), "status not monotone");
  double kb = 0.0;
  for (const auto& r : run.skills) {
    o.expect(r.total_kilobytes >= kb, "cumulative KB decreased at task " + std::to_string(r.index + 1));
    kb = r.total_kilobytes;
  }
  o.expect(run.skills.size() == 3 && run.skills[0].total_kilobytes > 0.0, "no skill written");
  for (const auto& t : run.result.tasks) o.expect(t.success(), t.task_id + " failed");
  const RunData data = load_run(dir / "run");
  const auto first = first_skills_access(load_task_trace(data, suite.tasks[2].id));
  o.expect(first.has_value() && *first <= 2, "task 3 skills read not within first 2 calls");
  if (o.pass) o.detail = "KB " + fmt(run.skills[0].total_kilobytes) + " -> " + fmt(kb) + ", first skills call " +
                         std::to_string(*first);
  return o;
}

Outcome sandbox_limits() {
  Outcome o;
  TempDir dir;
  SandboxPolicy policy;
  policy.workdir = dir.path();
  const ExecResult slow = execute("sleep 31", policy);
  o.expect(slow.timed_out, "timed_out not set");
  o.expect(slow.exit_code == kTimeoutExitCode, "exit code " + std::to_string(slow.exit_code));
  o.expect(slow.render() == "[error] Command timed out after 30s.", "message '" + slow.render() + "'");
  o.expect(classify_outcome(slow.render(), {slow.exit_code, slow.timed_out}) == OutcomeCategory::kTimeout,
           "not classified as Timeout");

  const ExecResult big = execute("head -c 1048576 /dev/zero | tr '\\0' x", policy);
  o.expect(big.truncated, "truncated not set");
  o.expect(big.render().ends_with("[OUTPUT TRUNCATED]"), "missing truncation marker");
  o.expect(big.combined.size() <= ExecLimits{}.max_output_bytes + kTruncationMarker.size(), "output not bounded");
  if (o.pass) o.detail = "timeout after " + fmt(slow.duration_seconds, 1) + "s";
  return o;
}

Outcome planner_purity() {
  Outcome o;
  Platform platform;
  const Snapshot snap = platform.seed(load_fixture(kData + "/fixtures/itsm.json"));
  PlatformService service(platform);
  PlatformProfile profile = platform_profile("servicenow");
  profile.instance_url = service.base_url();
  SandboxSetup setup;
  setup.env = {{"INSTANCE_URL", service.base_url()}, {profile.auth_env_var, auth_header_flags(profile.auth)}};
  Sandbox sandbox(setup);
  TerminalToolset terminal(sandbox);
  std::vector<Toolset*> toolsets{&terminal};
  auto provider = make_scripted(TurnScript::load(kData + "/scripts/planner/read-only-planner.json"));

  EpisodeRequest req;
  req.task_id = "planner-purity";
  req.goal = "Resolve incident INC0000004.";
  req.config.orchestration = Orchestration::kPlannerExecutor;
  req.profile = profile;
  const Trace trace = run_agent(req, toolsets, *provider, PricingTable::parse("scripted-model 3.00 15.00\n"));

  std::size_t posts = 0;
  std::size_t denied = 0;
  for (const auto& step : trace.steps) {
    if (step.phase != Phase::kPlanner) continue;
    for (const auto& r : step.tool_results) {
      const std::string cmd = r.invocation.arguments.value("command", "");
      if (cmd.find("-X POST") == std::string::npos) continue;
      ++posts;
      if (r.denied && r.observation.starts_with("[denied]")) ++denied;
    }
  }
  o.expect(posts == 1, "expected one planner POST, saw " + std::to_string(posts));
  o.expect(denied == posts, "POST was not denied");
  o.expect(platform.state_digest() == snap.digest, "platform digest changed");
  o.expect(!trace.fallback && trace.plan.has_value(), "planner produced no plan");
  return o;
}

Outcome cost_accounting() {
  Outcome o;
  const PricingTable pricing = PricingTable::parse("m 3.00 15.00\nn 0.075 0.30\n");
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> tokens(0, 2'000'000);
  Money running;
  TokenUsage total;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const TokenUsage u{tokens(rng), tokens(rng)};
    const bool cheap = i % 2 == 1;
    const long double hand = cheap ? (u.input_tokens * 0.075L + u.output_tokens * 0.30L) / 1e6L
                                   : (u.input_tokens * 3.0L + u.output_tokens * 15.0L) / 1e6L;
    const Money c = compute_cost(u, cheap ? "n" : "m", pricing);
    const long double got = static_cast<long double>(c.pico()) / 1e12L;
    worst = std::max(worst, static_cast<double>(std::fabs(got - hand)));
    if (!cheap) {
      running += c;
      total += u;
    }
  }
  o.expect(worst <= 1e-9, "max error " + std::to_string(worst));
  o.expect(compute_cost(total, "m", pricing).pico() == running.pico(), "cost not additive");
  // Rounding happens only when formatting.
  const Money third = compute_cost({1, 0}, "n", pricing);  // $0.000000075
  Money sum;
  for (int i = 0; i < 1000; ++i) sum += third;
  o.expect(sum.pico() == 75'000'000, "accumulation drifted");
  o.expect(sum.to_string(4) == "0.0001" && third.to_string(4) == "0.0000", "emission rounding");
  if (o.pass) {
    std::ostringstream s;
    s << "max abs error " << worst;
    o.detail = s.str();
  }
  return o;
}

}  // namespace

int main() {
  criterion("SE reproduction (2.2 / 2.9 / 2.8 / 1.5 pp, +-0.05)", se_reproduction);
  criterion("Oracle reproduction (89.1% +-0.1)", oracle_reproduction);
  criterion("Classifier fidelity", classifier_fidelity);
  criterion("Query engine matches brute-force oracle (1000 cases)", query_equivalence);
  criterion("Reset contract (digest equality, pre-checks fail)", reset_contract);
  criterion("End-to-end scripted benchmark (10 tasks)", e2e_benchmark);
  criterion("Skills lifecycle (3 tasks)", skills_lifecycle);
  criterion("Sandbox limits (timeout, truncation)", sandbox_limits);
  criterion("Planner purity (read-only POST denied)", planner_purity);
  criterion("Cost accounting (1e-9, additive)", cost_accounting);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}

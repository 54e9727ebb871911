#include "starshell/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "starshell/error.hpp"

namespace starshell {

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::kSuccess: return "success";
    case TaskStatus::kFailure: return "failure";
    case TaskStatus::kInvalidTask: return "invalid-task";
    case TaskStatus::kEnvironmentFailure: return "environment-failure";
  }
  return "failure";
}

TaskStatus parse_task_status(std::string_view text) {
  for (auto s : {TaskStatus::kSuccess, TaskStatus::kFailure, TaskStatus::kInvalidTask, TaskStatus::kEnvironmentFailure}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task status '" + std::string(text) + "'");
}

std::string_view to_string(Cohort cohort) {
  switch (cohort) {
    case Cohort::kAll: return "all";
    case Cohort::kSuccess: return "success";
    case Cohort::kFailure: return "failure";
  }
  return "all";
}

SuccessRate success_rate_se(std::size_t successes, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "success rate of an empty task set");
  if (successes > n) throw Error(ErrorKind::kInvalidArgument, "more successes than tasks");
  const double sr = static_cast<double>(successes) / static_cast<double>(n);
  return {sr, sample_proportion_se(sr, n)};
}

double sample_proportion_se(double p, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "standard error with n = 0");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "proportion outside [0, 1]");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

SuiteAggregates compute_aggregates(const std::vector<TaskResult>& tasks) {
  SuiteAggregates agg;
  double wall = 0.0;
  for (const auto& t : tasks) {
    if (t.status == TaskStatus::kInvalidTask) {
      ++agg.invalid;
      continue;
    }
    if (t.status == TaskStatus::kEnvironmentFailure) {
      ++agg.environment_failures;
      continue;
    }
    ++agg.n;
    if (t.success()) ++agg.successes;
    agg.total_cost += t.cost;
    agg.total_tool_calls += t.tool_calls;
    wall += t.wall_clock_seconds;
  }
  if (agg.n > 0) {
    const auto rate = success_rate_se(agg.successes, agg.n);
    agg.sr = rate.sr;
    agg.se = rate.se;
    agg.mean_tool_calls = static_cast<double>(agg.total_tool_calls) / static_cast<double>(agg.n);
    agg.mean_wall_clock_seconds = wall / static_cast<double>(agg.n);
  }
  return agg;
}

OracleUnion oracle_union(const std::map<std::string, bool>& a, const std::map<std::string, bool>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kMismatchedTaskSets, "runs cover different numbers of tasks");
  OracleUnion u;
  std::size_t a_ok = 0;
  std::size_t b_ok = 0;
  for (const auto& [id, sa] : a) {
    const auto it = b.find(id);
    if (it == b.end()) throw Error(ErrorKind::kMismatchedTaskSets, "task '" + id + "' is missing from the second run");
    const bool sb = it->second;
    if (sa && sb) ++u.both;
    else if (sa) ++u.only_a;
    else if (sb) ++u.only_b;
    else ++u.neither;
    a_ok += sa ? 1 : 0;
    b_ok += sb ? 1 : 0;
  }
  u.n = a.size();
  if (u.n == 0) throw Error(ErrorKind::kInvalidArgument, "oracle over an empty task set");
  const double n = static_cast<double>(u.n);
  u.sr_a = static_cast<double>(a_ok) / n;
  u.sr_b = static_cast<double>(b_ok) / n;
  u.sr_oracle = static_cast<double>(u.both + u.only_a + u.only_b) / n;
  return u;
}

std::vector<TaskSample> samples_from(const std::vector<TaskResult>& tasks) {
  std::vector<TaskSample> out;
  for (const auto& t : tasks) {
    if (!t.scored()) continue;
    out.push_back({t.task_id, t.success(), t.tool_calls, t.outcomes});
  }
  return out;
}

std::map<Cohort, Histogram> tool_call_histogram(const std::vector<TaskSample>& samples, std::size_t cap) {
  if (cap == 0) throw Error(ErrorKind::kInvalidArgument, "histogram cap must be positive");
  std::map<Cohort, Histogram> out{{Cohort::kAll, {}}, {Cohort::kSuccess, {}}, {Cohort::kFailure, {}}};
  for (const auto& s : samples) {
    const std::size_t bin = std::min(s.tool_calls, cap);
    ++out[Cohort::kAll][bin];
    ++out[s.success ? Cohort::kSuccess : Cohort::kFailure][bin];
  }
  return out;
}

std::map<Cohort, Breakdown> error_breakdown(const std::vector<TaskSample>& samples) {
  std::map<Cohort, std::map<OutcomeCategory, std::size_t>> counts;
  std::map<Cohort, std::size_t> totals{{Cohort::kAll, 0}, {Cohort::kSuccess, 0}, {Cohort::kFailure, 0}};
  for (const auto& s : samples) {
    const Cohort cohort = s.success ? Cohort::kSuccess : Cohort::kFailure;
    for (const auto category : s.outcomes) {
      ++counts[Cohort::kAll][category];
      ++counts[cohort][category];
      ++totals[Cohort::kAll];
      ++totals[cohort];
    }
  }
  std::map<Cohort, Breakdown> out;
  for (const auto& [cohort, total] : totals) {
    Breakdown& b = out[cohort];
    for (const auto category : kAllOutcomeCategories) {
      const std::size_t c = counts[cohort][category];
      b[category] = total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total);
    }
  }
  return out;
}

}  // namespace starshell

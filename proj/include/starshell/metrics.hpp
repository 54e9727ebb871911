#pragma once

#include <map>
#include <string>
#include <vector>

#include "starshell/outcome.hpp"
#include "starshell/results.hpp"

namespace starshell {

struct SuccessRate {
  double sr = 0.0;
  double se = 0.0;
};

// sr = successes / n, se = sqrt(sr (1 - sr) / n).
SuccessRate success_rate_se(std::size_t successes, std::size_t n);
// Same estimator for a proportion that is not a whole count of n.
double sample_proportion_se(double p, std::size_t n);

SuiteAggregates compute_aggregates(const std::vector<TaskResult>& tasks);

struct OracleUnion {
  std::size_t n = 0;
  std::size_t both = 0;
  std::size_t only_a = 0;
  std::size_t only_b = 0;
  std::size_t neither = 0;
  double sr_a = 0.0;
  double sr_b = 0.0;
  double sr_oracle = 0.0;
};

// Per-task success = a OR b. Both maps must cover the same task ids.
OracleUnion oracle_union(const std::map<std::string, bool>& a, const std::map<std::string, bool>& b);

// Per-task data the histogram and breakdown aggregates need.
struct TaskSample {
  std::string task_id;
  bool success = false;
  std::size_t tool_calls = 0;
  std::vector<OutcomeCategory> outcomes;
};

std::vector<TaskSample> samples_from(const std::vector<TaskResult>& tasks);

enum class Cohort { kAll, kSuccess, kFailure };
std::string_view to_string(Cohort cohort);

// tool_calls -> task count, values above cap land in the cap bin.
using Histogram = std::map<std::size_t, std::size_t>;
std::map<Cohort, Histogram> tool_call_histogram(const std::vector<TaskSample>& samples, std::size_t cap = 50);

// Fraction of ALL tool calls in the cohort per category. Every category is
// present; a cohort with no calls has all zeros.
using Breakdown = std::map<OutcomeCategory, double>;
std::map<Cohort, Breakdown> error_breakdown(const std::vector<TaskSample>& samples);

}  // namespace starshell

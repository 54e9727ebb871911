#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "starshell/results.hpp"
#include "starshell/runner.hpp"
#include "starshell/trace.hpp"

namespace starshell {

// Read-only view of a run directory.
struct RunData {
  std::filesystem::path dir;
  Json manifest;
  std::vector<SuiteResult> rows;
  std::vector<SkillsTaskRecord> skills;
};

RunData load_run(const std::filesystem::path& dir);
Trace load_task_trace(const RunData& run, const std::string& task_id);

std::string analyze_histogram(const RunData& run, std::size_t cap = 50);
std::string analyze_errors(const RunData& run);
std::string analyze_skills_growth(const RunData& run);
std::string analyze_oracle(const RunData& a, const RunData& b);

// 1-based index of the first terminal call that touches the skills
// directory / the platform; nullopt if none.
std::optional<std::size_t> first_skills_access(const Trace& trace);
std::optional<std::size_t> first_platform_call(const Trace& trace);

}  // namespace starshell

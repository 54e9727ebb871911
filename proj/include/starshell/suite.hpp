#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starshell/prompts.hpp"
#include "starshell/validator.hpp"

namespace starshell {

enum class TaskKind { kWrite, kRead };
std::string_view to_string(TaskKind kind);

struct TaskInstance {
  std::string id;
  std::string category;
  TaskKind kind = TaskKind::kWrite;
  std::string goal;
  std::string fixture;  // key into Suite::fixtures
  std::vector<ValidatorCheck> checks;
  // Scripted trajectories: "script" applies to every configuration,
  // "scripts" entries keyed "<agent>/<orchestration>" take precedence.
  std::optional<std::filesystem::path> script;
  std::map<std::string, std::filesystem::path> scripts;
};

struct Suite {
  std::string name;
  std::string profile;  // platform profile id
  std::map<std::string, std::filesystem::path> fixtures;
  std::vector<TaskInstance> tasks;
  std::filesystem::path source;
};

// Write tasks need a state check, read tasks an answer check; ids unique;
// fixtures must be declared.
void validate_suite(const Suite& suite);

// Relative fixture and script paths resolve against the suite file.
Suite parse_suite(const Json& j, const std::filesystem::path& base_dir);
Suite load_suite(const std::filesystem::path& path);

// Script for this task under `config`, if any.
std::optional<std::filesystem::path> script_for(const TaskInstance& task, const AgentConfig& config);

}  // namespace starshell

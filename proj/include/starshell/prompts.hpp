#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starshell/platform.hpp"

namespace starshell {

enum class Paradigm { kTerminal, kToolRegistry, kHybrid, kWebAdapter };
enum class Orchestration { kSingle, kPlannerExecutor };
enum class PromptRole { kSingle, kPlanner, kExecutor };

std::string_view to_string(Paradigm p);
Paradigm parse_paradigm(std::string_view text);
std::string_view to_string(Orchestration o);
Orchestration parse_orchestration(std::string_view text);

struct Features {
  bool docs = false;
  bool skills = false;
};

struct AgentConfig {
  Paradigm paradigm = Paradigm::kTerminal;
  Features features;
  Orchestration orchestration = Orchestration::kSingle;
  std::size_t max_tool_calls = 50;
  std::string model = "scripted-model";
};

// Everything platform-specific the prompts and the sandbox need.
struct PlatformProfile {
  std::string id;            // "servicenow", "erpnext"
  std::string display_name;  // "ServiceNow"
  std::string auth_env_var;  // holds the curl header flags, expanded via eval
  AuthConfig auth;
  std::string instance_url;  // filled in once the service is up
};

PlatformProfile platform_profile(std::string_view id);

// Value for auth_env_var: `-H "<name>: <value>"`, meant for `eval curl ...`.
std::string auth_header_flags(const AuthConfig& auth);

struct Plan {
  std::vector<std::string> steps;
  std::string raw;

  bool operator==(const Plan&) const = default;
};

// Base prompt for the paradigm (or the planner/executor role text), followed
// by the docs and skills extensions when those features are on.
// `tool_names` lists registry tools for the hybrid terminal+registry prompt.
std::string assemble_system_prompt(const PlatformProfile& profile, const AgentConfig& config,
                                   PromptRole role = PromptRole::kSingle,
                                   const Plan* plan = nullptr,
                                   const std::vector<std::string>& tool_names = {},
                                   bool hybrid_with_web = false);

}  // namespace starshell

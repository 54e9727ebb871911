#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "starshell/prompts.hpp"
#include "starshell/provider.hpp"
#include "starshell/toolset.hpp"
#include "starshell/trace.hpp"

namespace starshell {

struct EpisodeRequest {
  std::string task_id;
  std::string goal;
  AgentConfig config;
  PlatformProfile profile;
};

// Checks that the toolsets fit the paradigm: terminal needs a terminal
// toolset, tool_registry a registry, web_adapter a supplied web toolset,
// hybrid at least two toolsets.
void validate_config(const AgentConfig& config, std::span<Toolset* const> toolsets);

// Single-agent loop. Provider errors end the episode with
// TerminationReason::kProviderError; they are not rethrown.
Trace run_episode(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                  const PricingTable& pricing);

// Planner (read-only) then executor, sharing one tool-call budget. If the
// planner's reply has no usable plan the executor runs the single-agent
// prompt and the trace is flagged fallback.
Trace run_planner_executor(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                           const PricingTable& pricing);

// Dispatches on config.orchestration.
Trace run_agent(const EpisodeRequest& request, std::span<Toolset* const> toolsets, Provider& provider,
                const PricingTable& pricing);

Plan extract_plan(std::string_view planner_final_message);

}  // namespace starshell

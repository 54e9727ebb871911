#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace starshell {

inline constexpr std::string_view kTruncationMarker = "\n[OUTPUT TRUNCATED]";
inline constexpr int kTimeoutExitCode = 124;

struct ExecLimits {
  std::chrono::milliseconds timeout{30'000};
  std::size_t max_output_bytes = 16384;
};

struct ExecResult {
  std::string stdout_text;
  std::string stderr_text;
  // Both streams interleaved in arrival order, as a terminal would show them.
  // Ends with kTruncationMarker iff truncated.
  std::string combined;
  int exit_code = 0;
  double duration_seconds = 0.0;
  bool truncated = false;
  bool timed_out = false;

  // The observation text handed back to the model.
  std::string render() const;
};

std::string timeout_message(std::chrono::milliseconds timeout);

enum class SandboxMode { kUnrestricted, kReadOnlyHttp };

struct SandboxPolicy {
  SandboxMode mode = SandboxMode::kUnrestricted;
  std::filesystem::path workdir;
  std::map<std::string, std::string> env;
};

struct PolicyDecision {
  bool allowed = true;
  std::string reason;

  static PolicyDecision allow() { return {}; }
  static PolicyDecision deny(std::string reason) { return {false, std::move(reason)}; }
};

inline constexpr std::string_view kReadOnlyDenial =
    "state-changing API calls are not permitted in the planning phase";

PolicyDecision check_policy(std::string_view command, const SandboxPolicy& policy);

// Runs `command` under /bin/sh in policy.workdir with policy.env injected.
// Timeouts are reported in the result, not thrown; spawn problems throw.
// Does not consult check_policy; callers decide what to run.
ExecResult execute(std::string_view command, const SandboxPolicy& policy,
                   const ExecLimits& limits = {});

struct SandboxSetup {
  std::map<std::string, std::string> env;
  std::optional<std::filesystem::path> skills_root;
  std::optional<std::filesystem::path> docs_root;
  // Parent for the private workdir; defaults to the system temp directory.
  std::optional<std::filesystem::path> base_dir;
  ExecLimits limits;
};

// One episode's private working directory. skills/ and docs/ are symlinked in
// when configured. The directory is removed on destruction.
class Sandbox {
 public:
  explicit Sandbox(const SandboxSetup& setup);
  ~Sandbox();
  Sandbox(const Sandbox&) = delete;
  Sandbox& operator=(const Sandbox&) = delete;

  const std::filesystem::path& workdir() const { return policy_.workdir; }
  const SandboxPolicy& policy() const { return policy_; }
  const ExecLimits& limits() const { return limits_; }
  void set_mode(SandboxMode mode) { policy_.mode = mode; }

  PolicyDecision check(std::string_view command) const { return check_policy(command, policy_); }
  ExecResult execute(std::string_view command) const;

 private:
  SandboxPolicy policy_;
  ExecLimits limits_;
};

}  // namespace starshell

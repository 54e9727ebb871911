#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starshell/platform.hpp"
#include "starshell/provider.hpp"
#include "starshell/sandbox.hpp"

namespace starshell {

enum class ToolsetKind { kTerminal, kRegistry, kWeb };

struct DispatchContext {
  // Planning phase: state-changing operations are refused.
  bool read_only = false;
};

struct ToolOutput {
  std::string observation;
  std::optional<ExecResult> exec;
  bool denied = false;
};

// A named group of tools. Handler failures come back as observations; the
// episode never aborts because one call went wrong.
class Toolset {
 public:
  virtual ~Toolset() = default;
  virtual std::string name() const = 0;
  virtual ToolsetKind kind() const = 0;
  virtual const std::vector<ToolSchema>& schemas() const = 0;
  virtual ToolOutput dispatch(const ToolInvocation& call, const DispatchContext& context) = 0;

  bool has_tool(std::string_view tool) const;
};

// The one-tool terminal: {"command": "<shell text>"}.
class TerminalToolset final : public Toolset {
 public:
  static constexpr std::string_view kToolName = "terminal";

  explicit TerminalToolset(const Sandbox& sandbox);

  std::string name() const override { return "terminal"; }
  ToolsetKind kind() const override { return ToolsetKind::kTerminal; }
  const std::vector<ToolSchema>& schemas() const override { return schemas_; }
  ToolOutput dispatch(const ToolInvocation& call, const DispatchContext& context) override;

 private:
  const Sandbox& sandbox_;
  std::vector<ToolSchema> schemas_;
};

using ToolHandler = std::function<ToolOutput(const Json& arguments)>;

class ToolRegistry : public Toolset {
 public:
  explicit ToolRegistry(std::string name = "registry", ToolsetKind kind = ToolsetKind::kRegistry)
      : name_(std::move(name)), kind_(kind) {}

  // `mutating` tools are refused while DispatchContext::read_only is set.
  void register_tool(ToolSchema schema, ToolHandler handler, bool mutating = false);

  std::string name() const override { return name_; }
  ToolsetKind kind() const override { return kind_; }
  const std::vector<ToolSchema>& schemas() const override { return schemas_; }
  ToolOutput dispatch(const ToolInvocation& call, const DispatchContext& context) override;
  std::size_t size() const { return schemas_.size(); }

 private:
  struct Entry {
    ToolHandler handler;
    bool mutating;
  };
  std::string name_;
  ToolsetKind kind_;
  std::vector<ToolSchema> schemas_;
  std::vector<Entry> entries_;
};

// authenticate, get_documents, create_document, update_document,
// get_doctypes, get_doctype_fields, run_report; bound to `platform`.
std::unique_ptr<ToolRegistry> make_platform_registry(Platform& platform);

inline constexpr std::string_view kReadOnlyToolDenial =
    "[error] state-changing API calls are not permitted in the planning phase";

}  // namespace starshell

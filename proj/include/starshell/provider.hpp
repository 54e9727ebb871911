#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "starshell/money.hpp"

namespace starshell {

using Json = nlohmann::json;

enum class ChatRole { kSystem, kUser, kAssistant, kTool };

std::string_view to_string(ChatRole role);
ChatRole parse_chat_role(std::string_view text);

struct ToolInvocation {
  std::string id;
  std::string tool_name;
  Json arguments = Json::object();

  bool operator==(const ToolInvocation&) const = default;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) { return a += b; }
  bool operator==(const TokenUsage&) const = default;
};

struct ModelTurn {
  std::optional<std::string> text;
  std::vector<ToolInvocation> tool_calls;
  TokenUsage usage;

  bool has_tool_calls() const { return !tool_calls.empty(); }
  bool operator==(const ModelTurn&) const = default;
};

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;
  // Set iff role == kTool.
  std::optional<std::string> tool_call_id;
  // Assistant messages replay the calls they issued.
  std::vector<ToolInvocation> tool_calls;

  static ChatMessage system(std::string content) { return {ChatRole::kSystem, std::move(content), {}, {}}; }
  static ChatMessage user(std::string content) { return {ChatRole::kUser, std::move(content), {}, {}}; }
  static ChatMessage assistant(const ModelTurn& turn);
  static ChatMessage tool(std::string call_id, std::string content) {
    return {ChatRole::kTool, std::move(content), std::move(call_id), {}};
  }
};

struct ToolParameter {
  std::string name;
  std::string type = "string";  // JSON-schema type name
  bool required = true;
  std::string description;
};

struct ToolSchema {
  std::string name;
  std::string description;
  std::vector<ToolParameter> parameters;

  // JSON-schema object describing the arguments.
  Json parameters_schema() const;
};

void to_json(Json& j, const ToolInvocation& v);
void from_json(const Json& j, ToolInvocation& v);
void to_json(Json& j, const TokenUsage& v);
void from_json(const Json& j, TokenUsage& v);
void to_json(Json& j, const ModelTurn& v);
void from_json(const Json& j, ModelTurn& v);

// ---------------------------------------------------------------------------
// Cost accounting

struct ModelPrice {
  Money input_per_mtok;
  Money output_per_mtok;
};

class PricingTable {
 public:
  void set(std::string model, ModelPrice price) { prices_[std::move(model)] = price; }
  const ModelPrice* find(std::string_view model) const;
  bool empty() const { return prices_.empty(); }
  const std::map<std::string, ModelPrice, std::less<>>& entries() const { return prices_; }

  // Text format, one model per line, '#' comments:
  //   <model-id> <input USD per 1M tokens> <output USD per 1M tokens>
  static PricingTable parse(std::string_view text);
  static PricingTable load(const std::string& path);

 private:
  std::map<std::string, ModelPrice, std::less<>> prices_;
};

// input_tokens * input_price / 1e6 + output_tokens * output_price / 1e6, exact.
Money compute_cost(const TokenUsage& usage, std::string_view model, const PricingTable& pricing);

// ---------------------------------------------------------------------------
// Providers

class Provider {
 public:
  virtual ~Provider() = default;

  // history must be non-empty and start with a system message.
  virtual ModelTurn complete(std::span<const ChatMessage> history,
                             std::span<const ToolSchema> tools,
                             std::string_view model) = 0;

  virtual std::string kind() const = 0;
};

enum class ExhaustionPolicy { kError, kFinalMessage };

struct TurnScript {
  std::vector<ModelTurn> turns;
  ExhaustionPolicy exhaustion = ExhaustionPolicy::kError;

  static TurnScript from_json(const Json& j);
  static TurnScript load(const std::string& path);
  Json to_json() const;
};

inline constexpr std::string_view kScriptCompleteMessage = "(scripted run complete)";

// Replays a TurnScript in order. The cursor is the only mutable state and is
// guarded, so one handle can be shared, but two episodes sharing a handle
// interleave their turns.
class ScriptedProvider final : public Provider {
 public:
  explicit ScriptedProvider(TurnScript script) : script_(std::move(script)) {}

  ModelTurn complete(std::span<const ChatMessage> history,
                     std::span<const ToolSchema> tools,
                     std::string_view model) override;
  std::string kind() const override { return "scripted"; }

  std::size_t remaining() const;

 private:
  TurnScript script_;
  mutable std::mutex mutex_;
  std::size_t cursor_ = 0;
};

std::unique_ptr<Provider> make_scripted(TurnScript script);

void validate_history(std::span<const ChatMessage> history);

}  // namespace starshell

#include "starshell/provider.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "starshell/error.hpp"

namespace starshell {

std::string_view to_string(ChatRole role) {
  switch (role) {
    case ChatRole::kSystem: return "system";
    case ChatRole::kUser: return "user";
    case ChatRole::kAssistant: return "assistant";
    case ChatRole::kTool: return "tool";
  }
  return "user";
}

ChatRole parse_chat_role(std::string_view text) {
  if (text == "system") return ChatRole::kSystem;
  if (text == "user") return ChatRole::kUser;
  if (text == "assistant") return ChatRole::kAssistant;
  if (text == "tool") return ChatRole::kTool;
  throw Error(ErrorKind::kMalformedResponse, "unknown chat role '" + std::string(text) + "'");
}

ChatMessage ChatMessage::assistant(const ModelTurn& turn) {
  ChatMessage m;
  m.role = ChatRole::kAssistant;
  m.content = turn.text.value_or("");
  m.tool_calls = turn.tool_calls;
  return m;
}

Json ToolSchema::parameters_schema() const {
  Json properties = Json::object();
  Json required = Json::array();
  for (const auto& p : parameters) {
    Json prop = {{"type", p.type}};
    if (!p.description.empty()) prop["description"] = p.description;
    properties[p.name] = std::move(prop);
    if (p.required) required.push_back(p.name);
  }
  return {{"type", "object"}, {"properties", properties}, {"required", required}};
}

void to_json(Json& j, const ToolInvocation& v) {
  j = Json{{"id", v.id}, {"tool", v.tool_name}, {"arguments", v.arguments}};
}

void from_json(const Json& j, ToolInvocation& v) {
  v.id = j.value("id", "");
  v.tool_name = j.at("tool").get<std::string>();
  v.arguments = j.value("arguments", Json::object());
}

void to_json(Json& j, const TokenUsage& v) {
  j = Json{{"input_tokens", v.input_tokens}, {"output_tokens", v.output_tokens}};
}

void from_json(const Json& j, TokenUsage& v) {
  v.input_tokens = j.value("input_tokens", std::int64_t{0});
  v.output_tokens = j.value("output_tokens", std::int64_t{0});
  if (v.input_tokens < 0 || v.output_tokens < 0) {
    throw Error(ErrorKind::kMalformedResponse, "token counts must be non-negative");
  }
}

void to_json(Json& j, const ModelTurn& v) {
  j = Json::object();
  if (v.text) j["text"] = *v.text;
  j["tool_calls"] = v.tool_calls;
  j["usage"] = v.usage;
}

void from_json(const Json& j, ModelTurn& v) {
  v.text.reset();
  if (j.contains("text") && !j["text"].is_null()) v.text = j["text"].get<std::string>();
  v.tool_calls = j.value("tool_calls", std::vector<ToolInvocation>{});
  v.usage = j.value("usage", TokenUsage{});
  if (!v.text && v.tool_calls.empty()) {
    throw Error(ErrorKind::kMalformedResponse, "model turn has neither text nor tool calls");
  }
}

// ---------------------------------------------------------------------------

const ModelPrice* PricingTable::find(std::string_view model) const {
  auto it = prices_.find(model);
  return it == prices_.end() ? nullptr : &it->second;
}

PricingTable PricingTable::parse(std::string_view text) {
  PricingTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string model, input, output, extra;
    if (!(fields >> model)) continue;
    if (!(fields >> input >> output) || (fields >> extra)) {
      throw Error(ErrorKind::kInvalidPricing,
                  "pricing line " + std::to_string(line_no) +
                      ": expected '<model> <input_usd_per_mtok> <output_usd_per_mtok>'");
    }
    try {
      ModelPrice price{Money::parse(input), Money::parse(output)};
      // At most six decimals keeps every per-token cost an integral picodollar.
      if (price.input_per_mtok.pico() % 1'000'000 != 0 ||
          price.output_per_mtok.pico() % 1'000'000 != 0) {
        throw Error(ErrorKind::kInvalidPricing, "prices allow at most six decimals");
      }
      table.set(model, price);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidPricing,
                  "pricing line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

PricingTable PricingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read pricing file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

Money compute_cost(const TokenUsage& usage, std::string_view model, const PricingTable& pricing) {
  const ModelPrice* price = pricing.find(model);
  if (price == nullptr) {
    throw Error(ErrorKind::kUnknownModel, "no pricing for model '" + std::string(model) + "'");
  }
  // A price per million tokens in picodollars divided by 1e6 is the
  // per-token price in micro-picodollars; keep everything in 128-bit until
  // the final division, which is exact when prices have <= 6 decimals.
  const __int128 per_mtok_in = price->input_per_mtok.pico();
  const __int128 per_mtok_out = price->output_per_mtok.pico();
  const __int128 scaled = per_mtok_in * usage.input_tokens + per_mtok_out * usage.output_tokens;
  const __int128 pico = scaled / 1'000'000;
  if (pico > std::numeric_limits<std::int64_t>::max()) {
    throw Error(ErrorKind::kInvalidArgument, "cost overflow");
  }
  return Money::from_pico(static_cast<std::int64_t>(pico));
}

// ---------------------------------------------------------------------------

void validate_history(std::span<const ChatMessage> history) {
  if (history.empty()) throw Error(ErrorKind::kInvalidArgument, "empty chat history");
  if (history.front().role != ChatRole::kSystem) {
    throw Error(ErrorKind::kInvalidArgument, "chat history must start with a system message");
  }
}

TurnScript TurnScript::from_json(const Json& j) {
  TurnScript script;
  const std::string policy = j.value("exhaustion", "error");
  if (policy == "error") {
    script.exhaustion = ExhaustionPolicy::kError;
  } else if (policy == "final_message") {
    script.exhaustion = ExhaustionPolicy::kFinalMessage;
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown exhaustion policy '" + policy + "'");
  }
  script.turns = j.value("turns", std::vector<ModelTurn>{});
  return script;
}

TurnScript TurnScript::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read script " + path);
  try {
    return from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "script " + path + ": " + e.what());
  }
}

Json TurnScript::to_json() const {
  return {{"exhaustion", exhaustion == ExhaustionPolicy::kError ? "error" : "final_message"},
          {"turns", turns}};
}

ModelTurn ScriptedProvider::complete(std::span<const ChatMessage> history,
                                     std::span<const ToolSchema> /*tools*/,
                                     std::string_view /*model*/) {
  validate_history(history);
  std::lock_guard lock(mutex_);
  if (cursor_ < script_.turns.size()) return script_.turns[cursor_++];
  if (script_.exhaustion == ExhaustionPolicy::kError) {
    throw Error(ErrorKind::kScriptExhausted, "script exhausted");
  }
  ModelTurn final_turn;
  final_turn.text = std::string(kScriptCompleteMessage);
  return final_turn;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mutex_);
  return script_.turns.size() - cursor_;
}

std::unique_ptr<Provider> make_scripted(TurnScript script) {
  return std::make_unique<ScriptedProvider>(std::move(script));
}

}  // namespace starshell

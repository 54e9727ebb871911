#include "starshell/http_provider.hpp"

#include <cstdlib>

#include <httplib.h>

#include "starshell/error.hpp"

namespace starshell {
namespace {

std::string getenv_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

bool mentions_context_limit(const std::string& body) {
  return body.find("context_length") != std::string::npos ||
         body.find("maximum context") != std::string::npos ||
         body.find("context window") != std::string::npos;
}

}  // namespace

HttpProviderConfig HttpProviderConfig::from_env() {
  HttpProviderConfig config;
  config.base_url = getenv_or_empty("PROVIDER_BASE_URL");
  config.api_key = getenv_or_empty("PROVIDER_API_KEY");
  if (config.base_url.empty()) {
    throw Error(ErrorKind::kProviderUnconfigured, "PROVIDER_BASE_URL is not set");
  }
  return config;
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kProviderUnconfigured, "provider base URL needs a scheme: " + config_.base_url);
  }
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  scheme_host_port_ = config_.base_url.substr(0, path_start);
  if (path_start != std::string::npos) {
    path_prefix_ = config_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

Json HttpChatProvider::build_request(std::span<const ChatMessage> history,
                                     std::span<const ToolSchema> tools,
                                     std::string_view model) const {
  Json messages = Json::array();
  for (const auto& m : history) {
    Json msg = {{"role", to_string(m.role)}, {"content", m.content}};
    if (m.tool_call_id) msg["tool_call_id"] = *m.tool_call_id;
    if (!m.tool_calls.empty()) {
      Json calls = Json::array();
      for (const auto& call : m.tool_calls) {
        calls.push_back({{"id", call.id},
                         {"type", "function"},
                         {"function", {{"name", call.tool_name}, {"arguments", call.arguments.dump()}}}});
      }
      msg["tool_calls"] = std::move(calls);
    }
    messages.push_back(std::move(msg));
  }
  Json body = {{"model", model}, {"messages", std::move(messages)}};
  if (!tools.empty()) {
    Json tool_list = Json::array();
    for (const auto& t : tools) {
      tool_list.push_back({{"type", "function"},
                           {"function",
                            {{"name", t.name},
                             {"description", t.description},
                             {"parameters", t.parameters_schema()}}}});
    }
    body["tools"] = std::move(tool_list);
  }
  for (const auto& [key, value] : config_.extra_body.items()) body[key] = value;
  return body;
}

ModelTurn HttpChatProvider::parse_response(const Json& body) {
  try {
    const Json& message = body.at("choices").at(0).at("message");
    ModelTurn turn;
    if (message.contains("content") && message["content"].is_string() &&
        !message["content"].get<std::string>().empty()) {
      turn.text = message["content"].get<std::string>();
    }
    if (message.contains("tool_calls") && message["tool_calls"].is_array()) {
      for (const auto& call : message["tool_calls"]) {
        ToolInvocation inv;
        inv.id = call.value("id", "");
        inv.tool_name = call.at("function").at("name").get<std::string>();
        const Json& args = call.at("function").value("arguments", Json("{}"));
        inv.arguments = args.is_string() ? Json::parse(args.get<std::string>()) : args;
        turn.tool_calls.push_back(std::move(inv));
      }
    }
    if (body.contains("usage")) {
      const Json& usage = body["usage"];
      turn.usage.input_tokens = usage.value("prompt_tokens", usage.value("input_tokens", std::int64_t{0}));
      turn.usage.output_tokens = usage.value("completion_tokens", usage.value("output_tokens", std::int64_t{0}));
    }
    if (!turn.text && turn.tool_calls.empty()) {
      // An empty assistant message is still a final answer, not a missing one.
      turn.text = std::string();
    }
    return turn;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kMalformedResponse, std::string("malformed completion response: ") + e.what());
  }
}

ModelTurn HttpChatProvider::complete(std::span<const ChatMessage> history,
                                     std::span<const ToolSchema> tools,
                                     std::string_view model) {
  validate_history(history);
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace(config_.auth_header, config_.auth_prefix + config_.api_key);
  }
  const std::string payload = build_request(history, tools, model).dump();
  auto response = client.Post(path_prefix_ + config_.path, headers, payload, "application/json");
  if (!response) {
    throw Error(ErrorKind::kBackendUnreachable,
                "provider unreachable: " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    if (mentions_context_limit(response->body)) {
      throw Error(ErrorKind::kContextLimitExceeded, "context limit exceeded: " + response->body);
    }
    throw Error(ErrorKind::kBackendUnreachable,
                "provider returned HTTP " + std::to_string(response->status) + ": " + response->body);
  }
  Json body;
  try {
    body = Json::parse(response->body);
  } catch (const Json::exception&) {
    throw Error(ErrorKind::kMalformedResponse, "provider response is not JSON");
  }
  return parse_response(body);
}

}  // namespace starshell

#pragma once

#include <chrono>
#include <string>

#include "starshell/provider.hpp"

namespace starshell {

// Vendor differences are expressed here as data; the wire format is always a
// chat-completions request/response.
struct HttpProviderConfig {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;
  std::string path = "/chat/completions";
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  // Merged verbatim into every request body (sampling parameters etc.).
  Json extra_body = Json::object();
  std::chrono::seconds timeout{120};

  // Reads PROVIDER_BASE_URL and PROVIDER_API_KEY.
  static HttpProviderConfig from_env();
};

class HttpChatProvider final : public Provider {
 public:
  explicit HttpChatProvider(HttpProviderConfig config);

  ModelTurn complete(std::span<const ChatMessage> history,
                     std::span<const ToolSchema> tools,
                     std::string_view model) override;
  std::string kind() const override { return "live"; }

  // Exposed for tests of the wire contract.
  Json build_request(std::span<const ChatMessage> history,
                     std::span<const ToolSchema> tools,
                     std::string_view model) const;
  static ModelTurn parse_response(const Json& body);

 private:
  HttpProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace starshell

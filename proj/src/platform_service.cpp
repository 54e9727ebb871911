#include "starshell/platform_service.hpp"

#include <httplib.h>

#include "starshell/error.hpp"

namespace starshell {

PlatformService::PlatformService(Platform& platform, int port)
    : platform_(platform), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.headers) request.headers.emplace_back(k, v);
    for (const auto& [k, v] : req.params) request.query[k] = v;
    request.body = req.body;
    const HttpResponse response = platform_.handle_request(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Patch(".*", handler);
  server_->Delete(".*", handler);
  server_->set_keep_alive_max_count(1);
  // httplib's default sets SO_REUSEPORT, which lets a second server share
  // the port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ < 0) throw Error(ErrorKind::kPortInUse, "cannot bind a loopback port");
  } else {
    if (!server_->bind_to_port("127.0.0.1", port)) {
      throw Error(ErrorKind::kPortInUse, "port " + std::to_string(port) + " is already in use");
    }
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

PlatformService::~PlatformService() { stop(); }

void PlatformService::wait() {
  while (server_->is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void PlatformService::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace starshell

#pragma once

#include <memory>
#include <string>
#include <thread>

#include "starshell/platform.hpp"

namespace httplib {
class Server;
}

namespace starshell {

// Serves a Platform over HTTP/1.1 on 127.0.0.1. Port 0 picks a free port.
class PlatformService {
 public:
  PlatformService(Platform& platform, int port = 0);
  ~PlatformService();
  PlatformService(const PlatformService&) = delete;
  PlatformService& operator=(const PlatformService&) = delete;

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  // Blocks until stop() is called from another thread.
  void wait();
  void stop();

 private:
  Platform& platform_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace starshell

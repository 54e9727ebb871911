#include "starshell/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <regex>
#include <utility>
#include <vector>

#include "starshell/error.hpp"

namespace starshell {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr const char* kShell = "/bin/sh";

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_.data(), O_CLOEXEC) != 0) {
      throw Error(ErrorKind::kSpawnFailure, std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() { close_fd(fds_[0]); }
  void close_write() { close_fd(fds_[1]); }

 private:
  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  std::array<int, 2> fds_{-1, -1};
};

struct Chunk {
  bool is_stderr;
  std::string data;
};

class OutputCapture {
 public:
  explicit OutputCapture(std::size_t max_bytes) : max_bytes_(max_bytes) {}

  void add(bool is_stderr, const char* data, std::size_t n) {
    if (n == 0) return;
    const std::size_t room = kept_ < max_bytes_ ? max_bytes_ - kept_ : 0;
    const std::size_t take = std::min(room, n);
    if (take < n) truncated_ = true;
    if (take == 0) return;
    if (!chunks_.empty() && chunks_.back().is_stderr == is_stderr) {
      chunks_.back().data.append(data, take);
    } else {
      chunks_.push_back({is_stderr, std::string(data, take)});
    }
    kept_ += take;
  }

  void finish(ExecResult& result, const std::string& trailer) {
    const std::size_t limit = trailer.size() < max_bytes_ ? max_bytes_ - trailer.size() : 0;
    if (kept_ > limit) {
      truncated_ = true;
      shrink_to(limit);
    }
    if (truncated_) trim_partial_utf8();
    for (const auto& chunk : chunks_) {
      (chunk.is_stderr ? result.stderr_text : result.stdout_text) += chunk.data;
      result.combined += chunk.data;
    }
    if (!trailer.empty()) {
      const std::string trimmed = trailer.substr(0, std::min(trailer.size(), max_bytes_));
      if (!result.stderr_text.empty()) result.stderr_text += '\n';
      result.stderr_text += trimmed;
      if (!result.combined.empty()) result.combined += '\n';
      result.combined += trimmed;
    }
    result.truncated = truncated_;
    if (truncated_) result.combined += kTruncationMarker;
  }

 private:
  void shrink_to(std::size_t limit) {
    while (kept_ > limit && !chunks_.empty()) {
      auto& last = chunks_.back().data;
      const std::size_t excess = kept_ - limit;
      if (excess >= last.size()) {
        kept_ -= last.size();
        chunks_.pop_back();
      } else {
        last.resize(last.size() - excess);
        kept_ -= excess;
      }
    }
  }

  // Never split a UTF-8 sequence at the cut point.
  void trim_partial_utf8() {
    if (chunks_.empty()) return;
    auto& last = chunks_.back().data;
    std::size_t i = last.size();
    std::size_t back = 0;
    while (i > 0 && back < 4 && (static_cast<unsigned char>(last[i - 1]) & 0xC0) == 0x80) {
      --i;
      ++back;
    }
    if (i == 0) return;
    const auto lead = static_cast<unsigned char>(last[i - 1]);
    std::size_t expected = 1;
    if ((lead & 0xE0) == 0xC0) expected = 2;
    else if ((lead & 0xF0) == 0xE0) expected = 3;
    else if ((lead & 0xF8) == 0xF0) expected = 4;
    if (expected > 1 && back + 1 < expected) last.resize(i - 1);
    if (last.empty()) chunks_.pop_back();
  }

  std::size_t max_bytes_;
  std::size_t kept_ = 0;
  bool truncated_ = false;
  std::vector<Chunk> chunks_;
};

std::vector<std::string> build_environment(const SandboxPolicy& policy) {
  std::map<std::string, std::string> env;
  const char* path = std::getenv("PATH");
  env["PATH"] = path != nullptr ? path : "/usr/local/bin:/usr/bin:/bin";
  env["HOME"] = policy.workdir.string();
  env["LANG"] = "C.UTF-8";
  env["TERM"] = "dumb";
  for (const auto& [k, v] : policy.env) env[k] = v;
  std::vector<std::string> out;
  out.reserve(env.size());
  for (const auto& [k, v] : env) out.push_back(k + "=" + v);
  return out;
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

// Returns false once the descriptor hits EOF.
bool drain(int fd, bool is_stderr, OutputCapture& capture) {
  std::array<char, 8192> buf{};
  while (true) {
    const ssize_t n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
      capture.add(is_stderr, buf.data(), static_cast<std::size_t>(n));
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return true;  // EAGAIN: nothing more right now
  }
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

std::string format_seconds(std::chrono::milliseconds ms) {
  if (ms.count() % 1000 == 0) return std::to_string(ms.count() / 1000) + "s";
  std::string s = std::to_string(static_cast<double>(ms.count()) / 1000.0);
  while (!s.empty() && s.back() == '0') s.pop_back();
  return s + "s";
}

}  // namespace

std::string timeout_message(std::chrono::milliseconds timeout) {
  return "[error] Command timed out after " + format_seconds(timeout) + ".";
}

std::string ExecResult::render() const {
  std::string out = combined;
  if (out.empty() && exit_code == 0) return "[no output]";
  if (exit_code != 0 && !timed_out) {
    if (!out.empty()) out += '\n';
    out += "[exit code: " + std::to_string(exit_code) + "]";
  }
  return out;
}

PolicyDecision check_policy(std::string_view command, const SandboxPolicy& policy) {
  if (policy.mode == SandboxMode::kUnrestricted) return PolicyDecision::allow();
  static const std::regex mutating(
      R"((^|[\s'"])(-X|--request)(\s*|=)['"]?(POST|PUT|PATCH|DELETE)\b)",
      std::regex::icase | std::regex::ECMAScript);
  if (std::regex_search(command.begin(), command.end(), mutating)) {
    return PolicyDecision::deny(std::string(kReadOnlyDenial));
  }
  // curl sends a body as POST unless -G / --get turns it into a query string.
  static const std::regex body_flag(R"((^|[\s'"])(-d|--data[a-z-]*|-F|--form[a-z-]*|-T|--upload-file|--json)(\s|=|['"]|$))");
  static const std::regex get_flag(R"((^|[\s'"])(-G|--get)(\s|['"]|$))");
  if (std::regex_search(command.begin(), command.end(), body_flag) &&
      !std::regex_search(command.begin(), command.end(), get_flag)) {
    return PolicyDecision::deny(std::string(kReadOnlyDenial) + " (request body implies POST)");
  }
  return PolicyDecision::allow();
}

ExecResult execute(std::string_view command, const SandboxPolicy& policy, const ExecLimits& limits) {
  if (limits.timeout.count() <= 0 || limits.max_output_bytes == 0) {
    throw Error(ErrorKind::kInvalidArgument, "exec limits must be positive");
  }
  std::error_code ec;
  if (!fs::is_directory(policy.workdir, ec)) {
    throw Error(ErrorKind::kSpawnFailure, "workdir missing: " + policy.workdir.string());
  }
  if (::access(kShell, X_OK) != 0) {
    throw Error(ErrorKind::kSpawnFailure, std::string("interpreter missing: ") + kShell);
  }

  // Everything the child needs is prepared before fork.
  const std::string command_text(command);
  const std::string workdir = policy.workdir.string();
  std::vector<std::string> env_strings = build_environment(policy);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::array<const char*, 4> argv{kShell, "-c", command_text.c_str(), nullptr};

  Pipe out_pipe, err_pipe, exec_pipe;
  const auto start = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorKind::kSpawnFailure, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out_pipe.write_end(), STDOUT_FILENO);
    ::dup2(err_pipe.write_end(), STDERR_FILENO);
    if (::chdir(workdir.c_str()) != 0) {
      const int err = errno;
      (void)!::write(exec_pipe.write_end(), &err, sizeof err);
      ::_exit(127);
    }
    ::execve(kShell, const_cast<char* const*>(argv.data()), envp.data());
    const int err = errno;
    (void)!::write(exec_pipe.write_end(), &err, sizeof err);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out_pipe.close_write();
  err_pipe.close_write();
  exec_pipe.close_write();

  int child_errno = 0;
  if (::read(exec_pipe.read_end(), &child_errno, sizeof child_errno) == sizeof child_errno) {
    ::waitpid(pid, nullptr, 0);
    throw Error(ErrorKind::kSpawnFailure, std::string("exec failed: ") + std::strerror(child_errno));
  }

  set_nonblocking(out_pipe.read_end());
  set_nonblocking(err_pipe.read_end());
  OutputCapture capture(limits.max_output_bytes);
  const auto deadline = start + limits.timeout;
  bool out_open = true, err_open = true, exited = false, timed_out = false;
  int status = 0;

  while (true) {
    if (!exited) {
      const pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) exited = true;
    }
    if (exited) {
      // Final drain; anything still holding the pipes is a leftover
      // background job and is killed with the group.
      if (out_open) out_open = drain(out_pipe.read_end(), false, capture);
      if (err_open) err_open = drain(err_pipe.read_end(), true, capture);
      ::kill(-pid, SIGKILL);
      break;
    }
    const auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      if (out_open) drain(out_pipe.read_end(), false, capture);
      if (err_open) drain(err_pipe.read_end(), true, capture);
      break;
    }
    std::array<pollfd, 2> fds{pollfd{out_open ? out_pipe.read_end() : -1, POLLIN, 0},
                              pollfd{err_open ? err_pipe.read_end() : -1, POLLIN, 0}};
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    const int wait_ms = static_cast<int>(std::min<long long>(remaining.count() + 1, 20));
    const int ready = ::poll(fds.data(), fds.size(), wait_ms);
    if (ready > 0) {
      if (out_open && (fds[0].revents & (POLLIN | POLLHUP))) out_open = drain(out_pipe.read_end(), false, capture);
      if (err_open && (fds[1].revents & (POLLIN | POLLHUP))) err_open = drain(err_pipe.read_end(), true, capture);
    }
  }

  ExecResult result;
  result.timed_out = timed_out;
  result.exit_code = timed_out ? kTimeoutExitCode : decode_status(status);
  capture.finish(result, timed_out ? timeout_message(limits.timeout) : std::string());
  result.duration_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

Sandbox::Sandbox(const SandboxSetup& setup) : limits_(setup.limits) {
  const fs::path base = setup.base_dir.value_or(fs::temp_directory_path());
  fs::create_directories(base);
  std::string templ = (base / "starshell-XXXXXX").string();
  if (::mkdtemp(templ.data()) == nullptr) {
    throw Error(ErrorKind::kSpawnFailure, "cannot create sandbox workdir under " + base.string());
  }
  policy_.workdir = templ;
  policy_.env = setup.env;
  if (setup.skills_root) {
    fs::create_directories(*setup.skills_root);
    fs::create_directory_symlink(fs::absolute(*setup.skills_root), policy_.workdir / "skills");
  }
  if (setup.docs_root) {
    fs::create_directory_symlink(fs::absolute(*setup.docs_root), policy_.workdir / "docs");
  }
}

Sandbox::~Sandbox() {
  std::error_code ec;
  // remove_all does not follow the skills/docs symlinks.
  fs::remove_all(policy_.workdir, ec);
}

ExecResult Sandbox::execute(std::string_view command) const {
  return starshell::execute(command, policy_, limits_);
}

}  // namespace starshell

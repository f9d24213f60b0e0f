#include "gradual/external_agent.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "gradual/errors.hpp"

namespace gradual {
namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw Error(what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::write(fd, data, n);
    if (w < 0) {
      if (errno == EINTR) continue;
      sys_fail("writing to external agent");
    }
    data += w;
    n -= static_cast<std::size_t>(w);
  }
}

}  // namespace

ExternalAgent::ExternalAgent(std::string command, ExternalAgentOptions options)
    : command_(std::move(command)), options_(options) {
  // A dead child must surface as an error from write(), not kill us.
  std::signal(SIGPIPE, SIG_IGN);

  int in[2], out[2];
  if (::pipe(in) != 0) sys_fail("pipe");
  if (::pipe(out) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    sys_fail("pipe");
  }
  pid_ = ::fork();
  if (pid_ < 0) sys_fail("fork");
  if (pid_ == 0) {
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::close(in[0]);
    ::close(in[1]);
    ::close(out[0]);
    ::close(out[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in[0]);
  ::close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

ExternalAgent::~ExternalAgent() { close(); }

void ExternalAgent::close() {
  if (to_child_ >= 0) ::close(to_child_);
  to_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    // Give the child a moment to see EOF and exit on its own.
    bool reaped = false;
    for (int i = 0; i < 50 && !reaped; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        reaped = true;
      } else {
        ::usleep(10000);
      }
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
  if (from_child_ >= 0) ::close(from_child_);
  from_child_ = -1;
}

Symbol ExternalAgent::step(Reward reward, Symbol observation) {
  if (to_child_ < 0) throw Error("external agent already closed");
  const Frame frame = encode_frame(observation, reward);
  write_all(to_child_, frame.data(), frame.size());

  pollfd p{from_child_, POLLIN, 0};
  const auto deadline = std::chrono::steady_clock::now() + options_.reply_timeout;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw Error("external agent did not reply within timeout");
    const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      sys_fail("poll");
    }
    if (rc == 0) throw Error("external agent did not reply within timeout");
    std::uint8_t byte;
    const ssize_t r = ::read(from_child_, &byte, 1);
    if (r == 1) return Symbol(byte);
    if (r == 0) throw Error("external agent closed its output");
    if (errno != EINTR && errno != EAGAIN) sys_fail("reading from external agent");
  }
}

AgentSnapshot ExternalAgent::snapshot() const {
  return {"external", 1, nlohmann::json{{"command", command_}}.dump()};
}

void ExternalAgent::restore(const AgentSnapshot& s) {
  if (s.kind != "external" || s.version != 1)
    throw ValidationError("snapshot of '" + s.kind + "' cannot restore an external agent");
  const auto cmd = nlohmann::json::parse(s.payload).at("command").get<std::string>();
  if (cmd != command_) throw ValidationError("snapshot belongs to a different external command");
}

}  // namespace gradual

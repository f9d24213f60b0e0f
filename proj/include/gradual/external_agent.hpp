#pragma once

// Agent living in a child process, spoken to over its stdin/stdout with the
// two-octet frame protocol.

#include <chrono>
#include <string>
#include <sys/types.h>

#include "gradual/agent.hpp"

namespace gradual {

struct ExternalAgentOptions {
  std::chrono::milliseconds reply_timeout{5000};
};

class ExternalAgent final : public Agent {
 public:
  // Runs `command` through /bin/sh -c.
  explicit ExternalAgent(std::string command, ExternalAgentOptions options = {});
  ~ExternalAgent() override;

  ExternalAgent(const ExternalAgent&) = delete;
  ExternalAgent& operator=(const ExternalAgent&) = delete;

  // Sends one frame and waits for the reply byte.  Throws Error if the
  // child exits, closes its output or misses the reply timeout; the harness
  // turns that into AgentFailure.
  Symbol step(Reward reward, Symbol observation) override;

  // The child's state is opaque, so snapshots only record the command.
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "external"; }

  // Closes the child's input and reaps it; idempotent.
  void close();

 private:
  std::string command_;
  ExternalAgentOptions options_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

}  // namespace gradual

#pragma once

// Evaluation loops: Solve (one instance) and RunCurriculum (a task list),
// the step-count objective rho, and the transfer checks built on it.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gradual/agent.hpp"
#include "gradual/errors.hpp"
#include "gradual/instance.hpp"
#include "gradual/stream.hpp"
#include "gradual/task.hpp"

namespace gradual {

inline constexpr double kDefaultForgettingConstant = 1.2;

struct SessionOptions {
  std::optional<std::uint64_t> budget_steps;
  std::optional<double> budget_seconds;
  // Updated with the live instance before every agent step; see OracleAgent.
  InstanceTap* tap = nullptr;
  // Called after each task of a curriculum completes, with its index.
  std::function<void(std::size_t)> on_task_complete;
};

struct SolveResult {
  std::uint64_t steps = 0;
  bool solved_within_soft = false;
  bool terminated_by_hard = false;
  SessionLog log;  // this instance only
};

struct TaskOutcome {
  std::string id;
  std::size_t instances_attempted = 0;
  std::size_t instances_successful = 0;
  std::uint64_t steps = 0;
  bool completed = false;
};

struct CurriculumResult {
  std::uint64_t total_steps = 0;
  bool completed = false;
  std::vector<TaskOutcome> per_task;
  SessionLog log;
};

class AgentFailure : public Error {
 public:
  AgentFailure(const std::string& what, SessionLog partial)
      : Error(what), partial_(std::move(partial)) {}
  const SessionLog& partial_log() const { return partial_; }

 private:
  SessionLog partial_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
  const CurriculumResult& partial() const { return partial_; }
  void set_partial(CurriculumResult r) { partial_ = std::move(r); }

 private:
  CurriculumResult partial_;
};

// One lockstep agent/environment stream.  Instances run through the same
// session are delivered back to back with nothing marking the switch; the
// reward earned by an instance's final action rides along with the next
// instance's priming frame.
class Session {
 public:
  explicit Session(Agent& agent, SessionOptions options = {});

  SolveResult solve(InstanceState& instance, int r_star, Boundary boundary = {});

  const SessionLog& log() const { return log_; }
  SessionLog take_log() { return std::move(log_); }
  std::uint64_t total_steps() const { return steps_; }

 private:
  void check_budget() const;

  Agent& agent_;
  SessionOptions options_;
  SessionLog log_;
  Reward carry_ = Reward::none;
  std::uint64_t steps_ = 0;
  std::chrono::steady_clock::time_point started_;
};

// The solve loop.  The priming step is not counted in the returned steps.
SolveResult solve_instance(Agent& agent, InstanceState& instance, int r_star,
                           const SessionOptions& options = {});

// The curriculum loop.  An instance counts as a success when it is solved within
// its soft limit; anything else resets the task's success counter.
CurriculumResult run_curriculum(Agent& agent, const CurriculumSpec& curriculum, int n_s,
                                const SessionOptions& options = {});
CurriculumResult run_curriculum(Agent& agent, const CurriculumSpec& curriculum,
                                const SessionOptions& options = {});

// Steps needed to complete the curriculum with its own n_s.
std::uint64_t rho(Agent& agent, const CurriculumSpec& curriculum, const SessionOptions& options = {});

struct TransferReport {
  // Gradual learning: primed = after pretraining, fresh = untrained.
  // Forgetting: primed = after the extra task, fresh = before it.
  std::uint64_t rho_primed = 0;
  std::uint64_t rho_fresh = 0;
  bool passed = false;
  std::optional<double> constant_c;
};

struct TransferOptions {
  std::uint64_t seed = 1;        // training curriculum seed
  std::uint64_t probe_seed = 2;  // shared by both probe runs
  int n_s = 2;
  SessionOptions session;
};

// passed <=> rho(primed agent, probe) < rho(fresh agent, probe).
TransferReport gradual_learning_check(const AgentFactory& factory, const std::vector<TaskSpec>& pretrain,
                                      const TaskSpec& probe, const TransferOptions& options = {});

// sequence = (T1, ..., Tk); the agent trained on all of it is compared with
// its own snapshot taken before Tk.  passed <=> after <= c * before.
TransferReport forgetting_check(const AgentFactory& factory, const std::vector<TaskSpec>& sequence,
                                const TaskSpec& revisit, double c = kDefaultForgettingConstant,
                                const TransferOptions& options = {});

}  // namespace gradual

#include "gradual/harness.hpp"

namespace gradual {

Session::Session(Agent& agent, SessionOptions options)
    : agent_(agent), options_(std::move(options)), started_(std::chrono::steady_clock::now()) {}

void Session::check_budget() const {
  if (options_.budget_steps && steps_ >= *options_.budget_steps)
    throw BudgetExceeded("step budget of " + std::to_string(*options_.budget_steps) + " exhausted");
  if (options_.budget_seconds) {
    const std::chrono::duration<double> used = std::chrono::steady_clock::now() - started_;
    if (used.count() >= *options_.budget_seconds)
      throw BudgetExceeded("wall-clock budget of " + std::to_string(*options_.budget_seconds) +
                           " s exhausted");
  }
}

SolveResult Session::solve(InstanceState& instance, int r_star, Boundary boundary) {
  if (r_star < 1) throw ValidationError("r_star must be >= 1");
  const std::size_t first = log_.size();
  log_.mark_instance(std::move(boundary));
  if (options_.tap) {
    options_.tap->current = &instance;
    ++options_.tap->instances_started;
  }

  const EnvStep priming = env_step(instance, std::nullopt);
  log_.append(priming.observation, priming.reward, std::nullopt);

  Reward reward = carry_;
  Symbol observation = priming.observation;
  std::uint64_t t = 0;
  int in_row = 0;
  const std::uint64_t hard = hard_limit(instance);
  do {
    check_budget();
    Symbol action;
    try {
      action = agent_.step(reward, observation);
    } catch (const std::exception& e) {
      throw AgentFailure(std::string("agent failed: ") + e.what(), log_);
    }
    const EnvStep step = env_step(instance, action);
    log_.append(step.observation, step.reward, action);
    ++t;
    ++steps_;
    reward = step.reward;
    observation = step.observation;
    if (reward == Reward::positive) {
      ++in_row;
    } else if (reward == Reward::negative) {
      in_row = 0;
    }
  } while (in_row != r_star && t != hard);
  carry_ = reward;

  SolveResult result;
  result.steps = t;
  result.terminated_by_hard = in_row != r_star;
  result.solved_within_soft = !result.terminated_by_hard && t <= soft_limit(instance);
  result.log.mark_instance(log_.boundaries().back());
  for (std::size_t i = first; i < log_.size(); ++i) {
    const auto& rec = log_.records()[i];
    result.log.append(rec.observation, rec.reward, rec.action);
  }
  return result;
}

SolveResult solve_instance(Agent& agent, InstanceState& instance, int r_star,
                           const SessionOptions& options) {
  Session session(agent, options);
  return session.solve(instance, r_star);
}

CurriculumResult run_curriculum(Agent& agent, const CurriculumSpec& curriculum, int n_s,
                                const SessionOptions& options) {
  validate(curriculum);
  if (n_s < 1) throw ValidationError("n_s must be >= 1");

  Session session(agent, options);
  CurriculumResult result;
  try {
    for (std::size_t j = 0; j < curriculum.tasks.size(); ++j) {
      const TaskSpec& task = curriculum.tasks[j];
      result.per_task.push_back({task.id});
      TaskOutcome& outcome = result.per_task.back();
      const int required = req_reward(task);
      int in_row = 0;
      for (std::size_t attempt = 0; in_row < n_s; ++attempt) {
        const std::uint64_t seed = instance_seed(curriculum.seed, j, attempt);
        InstanceState instance = sample_instance(task, seed);
        Boundary b;
        b.task_id = task.id;
        b.task_index = j;
        b.instance_index = attempt;
        b.instance_seed = seed;
        b.starts_task = attempt == 0;
        const SolveResult solved = session.solve(instance, required, std::move(b));
        result.total_steps += solved.steps;
        outcome.steps += solved.steps;
        ++outcome.instances_attempted;
        if (solved.solved_within_soft) {
          ++outcome.instances_successful;
          ++in_row;
        } else {
          in_row = 0;
        }
      }
      outcome.completed = true;
      if (options.tap) options.tap->current = nullptr;
      if (options.on_task_complete) options.on_task_complete(j);
    }
  } catch (BudgetExceeded& e) {
    if (options.tap) options.tap->current = nullptr;
    // Steps of the interrupted instance.
    const std::uint64_t open = session.total_steps() - result.total_steps;
    result.total_steps += open;
    if (!result.per_task.empty() && open > 0) {
      result.per_task.back().steps += open;
      ++result.per_task.back().instances_attempted;
    }
    result.log = session.take_log();
    e.set_partial(std::move(result));
    throw;
  }
  if (options.tap) options.tap->current = nullptr;
  result.completed = true;
  result.log = session.take_log();
  return result;
}

CurriculumResult run_curriculum(Agent& agent, const CurriculumSpec& curriculum,
                                const SessionOptions& options) {
  return run_curriculum(agent, curriculum, curriculum.n_s, options);
}

std::uint64_t rho(Agent& agent, const CurriculumSpec& curriculum, const SessionOptions& options) {
  return run_curriculum(agent, curriculum, options).total_steps;
}

namespace {

CurriculumSpec single(const TaskSpec& task, const TransferOptions& options) {
  return {{task}, options.n_s, options.probe_seed};
}

}  // namespace

TransferReport gradual_learning_check(const AgentFactory& factory, const std::vector<TaskSpec>& pretrain,
                                      const TaskSpec& probe, const TransferOptions& options) {
  TransferReport report;
  auto primed = factory();
  if (!pretrain.empty()) run_curriculum(*primed, {pretrain, options.n_s, options.seed}, options.session);
  report.rho_primed = rho(*primed, single(probe, options), options.session);

  auto fresh = factory();
  report.rho_fresh = rho(*fresh, single(probe, options), options.session);
  report.passed = report.rho_primed < report.rho_fresh;
  return report;
}

TransferReport forgetting_check(const AgentFactory& factory, const std::vector<TaskSpec>& sequence,
                                const TaskSpec& revisit, double c, const TransferOptions& options) {
  if (!(c > 0.0)) throw ValidationError("forgetting constant c must be > 0");
  if (sequence.size() < 2) throw ValidationError("forgetting check needs at least two training tasks");

  auto trained = factory();
  std::optional<AgentSnapshot> before_last;
  SessionOptions training = options.session;
  training.on_task_complete = [&](std::size_t j) {
    if (j + 2 == sequence.size()) before_last = trained->snapshot();
  };
  run_curriculum(*trained, {sequence, options.n_s, options.seed}, training);

  auto earlier = factory();
  earlier->restore(*before_last);

  TransferReport report;
  report.constant_c = c;
  report.rho_fresh = rho(*earlier, single(revisit, options), options.session);
  report.rho_primed = rho(*trained, single(revisit, options), options.session);
  report.passed = static_cast<double>(report.rho_primed) <= c * static_cast<double>(report.rho_fresh);
  return report;
}

}  // namespace gradual

#include "doctest.h"

#include <memory>

#include "fixtures.hpp"
#include "gradual/errors.hpp"
#include "gradual/harness.hpp"
#include "gradual/task_library.hpp"

using namespace gradual;

namespace {

std::vector<Reward> rewards(const std::vector<int>& script) {
  std::vector<Reward> out;
  for (int r : script) out.push_back(reward_from_int(r));
  return out;
}

std::uint64_t run_script(const std::vector<int>& script, int r_star, LimitPolicy limits = {}) {
  const TaskSpec t = scripted_reward_task(rewards(script), r_star, limits);
  InstanceState st = sample_instance(t, 0);
  ConstantAgent agent('a'_sym);
  return solve_instance(agent, st, r_star).steps;
}

class ThrowingAgent final : public Agent {
 public:
  Symbol step(Reward, Symbol) override {
    if (++n_ == 3) throw std::runtime_error("boom");
    return 'a'_sym;
  }
  AgentSnapshot snapshot() const override { return {"throwing", 1, "{}"}; }
  void restore(const AgentSnapshot&) override {}
  std::string name() const override { return "throwing"; }

 private:
  int n_ = 0;
};

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("solve loop matches the straight-line reference on random scripts") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> script(1 + rng.below(30));
    for (auto& r : script) r = static_cast<int>(rng.below(3)) - 1;
    const int r_star = 1 + static_cast<int>(rng.below(4));
    const LimitPolicy limits{1 + rng.below(4), 1 + rng.below(4)};
    const std::uint64_t hard = limits.hard_factor * limits.per_reward * r_star;
    CAPTURE(trial);
    CHECK(run_script(script, r_star, limits) == fixtures::solve_reference(script, r_star, hard));
  }
}

TEST_CASE("solve result flags") {
  const TaskSpec t = scripted_reward_task(rewards({-1}), 2);
  InstanceState st = sample_instance(t, 0);
  ConstantAgent agent('a'_sym);
  const SolveResult r = solve_instance(agent, st, 2);
  CHECK(r.steps == 64);
  CHECK(r.terminated_by_hard);
  CHECK_FALSE(r.solved_within_soft);
  CHECK(r.log.size() == 65);
  CHECK(r.log.action_count() == 64);
  CHECK_THROWS_AS(solve_instance(agent, st, 0), ValidationError);
}

TEST_CASE("a solve past the soft limit is not a success") {
  // 17 zero rewards then +1s: t = 19 > soft = 16.
  std::vector<int> script(17, 0);
  script.push_back(1);
  const TaskSpec t = scripted_reward_task(rewards(script), 2);
  InstanceState st = sample_instance(t, 0);
  ConstantAgent agent('a'_sym);
  const SolveResult r = solve_instance(agent, st, 2);
  CHECK(r.steps == 19);
  CHECK_FALSE(r.terminated_by_hard);
  CHECK_FALSE(r.solved_within_soft);
}

TEST_CASE("oracle completes each task in n_s * R* steps") {
  InstanceTap tap;
  OracleAgent oracle(tap);
  SessionOptions opts;
  opts.tap = &tap;
  CurriculumSpec c{{make_task("micro_fixed"), make_task("micro_echo"), make_task("micro_group_A22")}, 3, 5};
  const CurriculumResult r = run_curriculum(oracle, c, opts);
  CHECK(r.completed);
  CHECK(r.total_steps == 3 * 3 * 5);
  for (const auto& t : r.per_task) {
    CHECK(t.instances_attempted == 3);
    CHECK(t.instances_successful == 3);
    CHECK(t.steps == 15);
  }
  CHECK(r.log.boundaries().size() == 9);
  CHECK(r.log.boundaries()[3].starts_task);
  CHECK_FALSE(r.log.boundaries()[4].starts_task);
}

TEST_CASE("single task, single success: T = R*") {
  InstanceTap tap;
  OracleAgent oracle(tap);
  SessionOptions opts;
  opts.tap = &tap;
  TaskSpec t = make_task("micro_map_A21");
  t.req_reward = 7;
  CHECK(rho(oracle, {{t}, 1, 3}, opts) == 7);
}

TEST_CASE("a generous forgetting constant always passes") {
  const AgentFactory f = [] { return std::make_unique<MemorizerAgent>(2, symbols_of("abcdxy")); };
  const auto r = forgetting_check(f, {make_task("micro_map_A21"), make_task("micro_group_A22")},
                                  make_task("micro_map_A21"), 1000.0);
  CHECK(r.passed);
  CHECK(r.constant_c == 1000.0);
}

TEST_CASE("description steps count towards the step total") {
  InstanceTap tap;
  OracleAgent oracle(tap);
  SessionOptions opts;
  opts.tap = &tap;
  const CurriculumResult r = run_curriculum(oracle, {{make_task("mini_describe_A291")}, 2, 1}, opts);
  // Five reward-0 steps through the description precede the five answers.
  CHECK(r.total_steps == 2 * (5 + 5));
}

TEST_CASE("sabotaged instance resets the success counter") {
  const TaskSpec task = make_task("micro_map_A21");
  const std::uint64_t soft = soft_limit(sample_instance(task, 1));
  const std::uint64_t wrong = soft - 4;
  InstanceTap tap;
  fixtures::SabotagedOracle agent(tap, 1, wrong);
  SessionOptions opts;
  opts.tap = &tap;
  const CurriculumResult r = run_curriculum(agent, {{task}, 2, 9}, opts);
  const std::uint64_t expect = fixtures::curriculum_reference(
      1, 2, {soft}, [&](std::size_t, std::size_t i) -> std::pair<std::uint64_t, bool> {
        return {i == 1 ? wrong + 5 : 5, true};
      });
  CHECK(r.total_steps == expect);
  CHECK(r.per_task[0].instances_attempted == 4);
  CHECK(r.per_task[0].instances_successful == 3);
}

TEST_CASE("budget exhaustion reports the partial result") {
  ConstantAgent agent('#'_sym);
  SessionOptions opts;
  opts.budget_steps = 100;
  try {
    run_curriculum(agent, bundled_curriculum(), opts);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.partial().total_steps == 100);
    CHECK_FALSE(e.partial().completed);
    REQUIRE(e.partial().per_task.size() == 1);
    CHECK(e.partial().per_task[0].steps == 100);
    CHECK(e.partial().per_task[0].instances_attempted >= 1);
    CHECK(e.partial().log.action_count() == 100);
  }
}

TEST_CASE("agent exceptions become AgentFailure with the partial log") {
  ThrowingAgent agent;
  try {
    run_curriculum(agent, {{make_task("micro_fixed")}, 1, 1});
    FAIL("expected AgentFailure");
  } catch (const AgentFailure& e) {
    CHECK(e.partial_log().action_count() == 2);
  }
}

TEST_CASE("the session stream has no gaps between instances") {
  InstanceTap tap;
  fixtures::NoisyOracle agent(tap, 5, 0.3);
  SessionOptions opts;
  opts.tap = &tap;
  const CurriculumResult r = run_curriculum(agent, bundled_curriculum(3), opts);
  const auto frames = r.log.delivered_frames();
  // Every delivered frame is answered exactly once.
  CHECK(frames.size() == r.log.action_count());
  for (const auto& f : frames) CHECK(f.reply.has_value());
  CHECK(r.log.wire_bytes().size() == 3 * r.log.action_count());
}

TEST_CASE("rho is deterministic") {
  auto once = [] {
    MemorizerAgent m(7, symbols_of("abcdxy"));
    return rho(m, {{make_task("micro_map_A21"), make_task("micro_group_A22")}, 2, 4});
  };
  CHECK(once() == once());
}

TEST_CASE("transfer check argument validation") {
  const AgentFactory f = [] { return std::make_unique<EchoAgent>(); };
  CHECK_THROWS_AS(forgetting_check(f, {make_task("micro_echo")}, make_task("micro_echo")), ValidationError);
  CHECK_THROWS_AS(forgetting_check(f, {make_task("micro_echo"), make_task("micro_echo")}, make_task("micro_echo"), 0.0),
                  ValidationError);
}

TEST_CASE("echo agent solves echo tasks fresh, so pretraining cannot help") {
  const AgentFactory f = [] { return std::make_unique<EchoAgent>(); };
  const auto r = gradual_learning_check(f, {make_task("micro_echo")}, make_task("micro_echo"));
  CHECK(r.rho_primed == r.rho_fresh);
  CHECK_FALSE(r.passed);
}

}

TEST_SUITE("transfer_statistics") {

TEST_CASE("random agent fails the gradual check in the majority of 20 repetitions") {
  // Pretraining cannot help an agent without memory; ties count as
  // failures.  Primed and fresh agents share a seed, so the primed run
  // continues the fresh run's random stream and the two counts are
  // correlated.
  int passes = 0;
  TaskSpec probe = make_task("micro_map_A21");
  probe.req_reward = 1;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const AgentFactory f = [rep] { return std::make_unique<RandomAgent>(rep, symbols_of("xy")); };
    TransferOptions opts;
    opts.n_s = 1;
    opts.seed = 100 + rep;
    opts.probe_seed = 200 + rep;
    passes += gradual_learning_check(f, {probe}, probe, opts).passed;
  }
  CHECK(passes <= 10);
}

}

#include "doctest.h"

#include "gradual/errors.hpp"
#include "gradual/external_agent.hpp"
#include "gradual/harness.hpp"
#include "gradual/task_library.hpp"

using namespace gradual;
using namespace std::chrono_literals;

TEST_SUITE("external_agent") {

TEST_CASE("echo child mirrors the in-process echo agent") {
  ExternalAgent ext(ECHO_AGENT_PATH);
  EchoAgent echo;
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Symbol o(static_cast<std::uint8_t>(rng.below(256)));
    const Reward r = reward_from_int(static_cast<int>(rng.below(3)) - 1);
    CHECK(ext.step(r, o) == echo.step(r, o));
  }
  ext.close();
  ext.close();
}

TEST_CASE("a child that exits is reported") {
  ExternalAgent ext("true");
  CHECK_THROWS_AS(ext.step(Reward::none, 'a'_sym), Error);
}

TEST_CASE("a silent child times out") {
  ExternalAgentOptions opts;
  opts.reply_timeout = 200ms;
  ExternalAgent ext("sleep 5", opts);
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(ext.step(Reward::none, 'a'_sym), Error);
  CHECK(std::chrono::steady_clock::now() - t0 < 2s);
}

TEST_CASE("harness turns child failures into AgentFailure") {
  ExternalAgent ext("printf a");
  CHECK_THROWS_AS(run_curriculum(ext, {{make_task("micro_fixed")}, 1, 1}), AgentFailure);
}

TEST_CASE("snapshot records the command") {
  ExternalAgent ext(ECHO_AGENT_PATH);
  const AgentSnapshot s = ext.snapshot();
  CHECK(s.kind == "external");
  CHECK_NOTHROW(ext.restore(s));
  CHECK_THROWS_AS(ext.restore(EchoAgent().snapshot()), ValidationError);
}

}

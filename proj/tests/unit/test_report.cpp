#include "doctest.h"

#include "gradual/harness.hpp"
#include "gradual/report.hpp"
#include "gradual/task_library.hpp"

using namespace gradual;

TEST_SUITE("report") {

TEST_CASE("curriculum result") {
  InstanceTap tap;
  OracleAgent oracle(tap);
  SessionOptions opts;
  opts.tap = &tap;
  const auto r = run_curriculum(oracle, {{make_task("micro_fixed")}, 1, 1}, opts);
  const auto j = to_json(r);
  CHECK(j.at("total_steps") == 5);
  CHECK(j.at("completed") == true);
  CHECK(j.at("tasks")[0].at("id") == "micro_fixed");
  CHECK_FALSE(j.contains("log"));
  const auto with_log = to_json(r, true);
  CHECK(with_log.at("log").at("records").size() == 6);
  CHECK(with_log.at("log").at("boundaries").size() == 1);
  const std::string text = render_text(r);
  CHECK(text.find("micro_fixed") != std::string::npos);
  CHECK(text.find("total steps: 5") != std::string::npos);
}

TEST_CASE("transfer report") {
  TransferReport t;
  t.rho_primed = 10;
  t.rho_fresh = 12;
  t.passed = true;
  t.constant_c = 1.5;
  const auto j = to_json(t);
  CHECK(j.at("rho_primed") == 10);
  CHECK(j.at("passed") == true);
  CHECK(render_text(t, "forgetting").rfind("forgetting: passed", 0) == 0);
}

TEST_CASE("complexity report") {
  ComplexityReport c;
  c.tasks.push_back({"a", true, "", {1}, 2, 1.0, 0.9, std::nullopt});
  c.tasks.push_back({"b", false, "too big", {}, 0, 0, 0, std::nullopt});
  c.unanalyzed = {"b"};
  const auto j = to_json(c);
  CHECK(j.at("order_ok") == true);
  CHECK(j.at("unanalyzed")[0] == "b");
  const std::string text = render_text(c);
  CHECK(text.find("unanalyzed: too big") != std::string::npos);
  CHECK(text.find("non-decreasing") != std::string::npos);
}

}

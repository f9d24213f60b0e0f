#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "gradual/config.hpp"
#include "gradual/errors.hpp"

using namespace gradual;
using nlohmann::json;

namespace {

json sample() {
  return json::parse(R"({
    "version": 1, "seed": 9, "n_s": 3,
    "tasks": [
      {"id": "micro_fixed", "req_reward": 4, "limits": {"per_reward": 6, "hard_factor": 2},
       "params": {"prompt": "?"}},
      {"id": "micro_echo"}
    ],
    "budget": {"steps": 1000, "seconds": 2.5}
  })");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses every field") {
  const RunConfig c = parse_run_config(sample());
  CHECK(c.curriculum.seed == 9);
  CHECK(c.curriculum.n_s == 3);
  REQUIRE(c.curriculum.tasks.size() == 2);
  CHECK(c.curriculum.tasks[0].req_reward == 4);
  CHECK(c.curriculum.tasks[0].limits == LimitPolicy{6, 2});
  CHECK(c.curriculum.tasks[1].req_reward == 5);
  CHECK(c.budget_steps == 1000);
  CHECK(c.budget_seconds == 2.5);
  InstanceState st = sample_instance(c.curriculum.tasks[0], 1);
  CHECK(env_step(st, std::nullopt).observation == '?'_sym);
}

TEST_CASE("round trip") {
  const RunConfig c = parse_run_config(sample());
  CHECK(to_json(parse_run_config(to_json(c))) == to_json(c));
}

TEST_CASE("rejections") {
  auto bad = [](auto edit) {
    json j = sample();
    edit(j);
    CHECK_THROWS_AS(parse_run_config(j), ConfigError);
  };
  bad([](json& j) { j["colour"] = "red"; });
  bad([](json& j) { j["version"] = 2; });
  bad([](json& j) { j.erase("version"); });
  bad([](json& j) { j.erase("tasks"); });
  bad([](json& j) { j["tasks"] = json::array(); });
  bad([](json& j) { j["n_s"] = 0; });
  bad([](json& j) { j["tasks"][0]["req_reward"] = 0; });
  bad([](json& j) { j["tasks"][0]["limits"]["hard_factor"] = 0; });
  bad([](json& j) { j["tasks"][0]["limits"]["extra"] = 1; });
  bad([](json& j) { j["tasks"][0]["id"] = "nope"; });
  bad([](json& j) { j["tasks"][1]["params"] = {{"letters", "aa"}}; });
  bad([](json& j) { j["budget"]["steps"] = -3; });
  bad([](json& j) { j["budget"]["seconds"] = -1.0; });
  bad([](json& j) { j["seed"] = "one"; });
}

TEST_CASE("files") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/curriculum.json"), ConfigError);
  const std::string path = "config_test_tmp.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_run_config(path), ConfigError);
  {
    std::ofstream out(path);
    out << sample().dump();
  }
  CHECK(load_run_config(path).curriculum.n_s == 3);
  std::remove(path.c_str());
}

}

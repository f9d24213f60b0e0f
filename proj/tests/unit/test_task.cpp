#include "doctest.h"

#include <set>

#include "gradual/errors.hpp"
#include "gradual/task.hpp"
#include "gradual/task_library.hpp"

using namespace gradual;

TEST_SUITE("task") {

TEST_CASE("limits") {
  const TaskSpec t = make_task("mini_describe_A291");
  const InstanceState st = sample_instance(t, 4);
  const std::uint64_t d = st.spec().description_length();
  CHECK(d == 5);
  CHECK(soft_limit(st) == d + 8 * 5);
  CHECK(hard_limit(st) == 4 * (d + 8 * 5));
  LimitPolicy custom{3, 2};
  CHECK(custom.soft(st.spec(), 2) == d + 6);
  CHECK(custom.hard(st.spec(), 2) == 2 * (d + 6));
}

TEST_CASE("validation") {
  TaskSpec t = make_task("micro_fixed");
  CHECK_NOTHROW(validate(t));
  t.req_reward = 0;
  CHECK_THROWS_AS(validate(t), ValidationError);
  t.req_reward = 1;
  t.limits.hard_factor = 0;
  CHECK_THROWS_AS(validate(t), ValidationError);
  CurriculumSpec c;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.tasks.push_back(make_task("micro_fixed"));
  c.n_s = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
}

TEST_CASE("instance seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::size_t j = 0; j < 10; ++j)
    for (std::size_t i = 0; i < 100; ++i) seen.insert(instance_seed(1, j, i));
  CHECK(seen.size() == 1000);
  CHECK(instance_seed(1, 2, 3) == instance_seed(1, 2, 3));
  CHECK(instance_seed(1, 2, 3) != instance_seed(2, 2, 3));
}

TEST_CASE("sampling is deterministic in the seed") {
  const TaskSpec t = make_task("micro_group_A22");
  CHECK(sample_instance(t, 11).spec() == sample_instance(t, 11).spec());
}

}

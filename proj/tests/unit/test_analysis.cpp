#include "doctest.h"

#include "fixtures.hpp"
#include "gradual/analysis.hpp"
#include "gradual/task_library.hpp"

using namespace gradual;

TEST_SUITE("analysis") {

TEST_CASE("identical machines share everything") {
  const EpsilonTransducer t(fixtures::six_state_two_classes());
  const auto s = shared_structure(t, t);
  CHECK(s.score == 1.0);
  CHECK(s.common_edges == t.transitions().size());
  CHECK(s.exact);
}

TEST_CASE("exact search matches brute force on tiny machines") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const EpsilonTransducer a(fixtures::random_unifilar(seed, 2 + seed % 3, 2, 2));
    const EpsilonTransducer b(fixtures::random_unifilar(seed + 500, 2 + (seed / 3) % 3, 2, 2));
    CAPTURE(seed);
    CHECK(shared_structure(a, b).common_edges == fixtures::brute_force_common_edges(a, b));
  }
}

TEST_CASE("score is symmetric") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EpsilonTransducer a(fixtures::random_unifilar(seed, 2 + seed % 6, 2, 2));
    const EpsilonTransducer b(fixtures::random_unifilar(seed + 1000, 2 + (seed / 6) % 6, 2, 2));
    CAPTURE(seed);
    CHECK(shared_structure(a, b).score == shared_structure(b, a).score);
    CHECK(shared_structure_greedy(a, b).score == shared_structure_greedy(b, a).score);
  }
}

TEST_CASE("greedy never beats exact") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const EpsilonTransducer a(fixtures::random_unifilar(seed, 3 + seed % 10, 2, 2));
    const EpsilonTransducer b(fixtures::random_unifilar(seed + 77, 3 + (seed * 7) % 10, 2, 2));
    const auto exact = shared_structure(a, b);
    const auto greedy = shared_structure_greedy(a, b);
    CAPTURE(seed);
    CHECK(exact.exact);
    CHECK(greedy.common_edges <= exact.common_edges);
    CHECK(greedy.score <= exact.score);
  }
}

TEST_CASE("witness maps are injective and realise the edge count") {
  const EpsilonTransducer a(fixtures::random_unifilar(3, 6, 2, 2));
  const EpsilonTransducer b(fixtures::random_unifilar(4, 5, 2, 2));
  const auto s = shared_structure(a, b);
  std::vector<std::size_t> f(a.state_count(), Machine::npos);
  std::set<std::size_t> used;
  for (auto [u, v] : s.witness) {
    f[u] = v;
    CHECK(used.insert(v).second);
  }
  std::size_t common = 0;
  for (const auto& t : a.transitions()) {
    if (f[t.from] == Machine::npos || f[t.to] == Machine::npos) continue;
    for (const auto& e : b.outgoing(f[t.from], t.input))
      if (e.to == f[t.to] && b.outputs()[e.output] == a.outputs()[t.output]) ++common;
  }
  CHECK(common == s.common_edges);
}

TEST_CASE("disjoint label sets share nothing") {
  MachineData other = fixtures::golden_mean();
  other.outputs = {"p", "q"};
  const auto s = shared_structure(EpsilonMachine(fixtures::golden_mean()), EpsilonMachine(other));
  CHECK(s.common_edges == 0);
  CHECK(s.score == 0.0);
}

TEST_CASE("node limit falls back to greedy") {
  const EpsilonTransducer a(fixtures::random_unifilar(9, 12, 2, 2));
  const EpsilonTransducer b(fixtures::random_unifilar(10, 12, 2, 2));
  SharedStructureOptions o;
  o.node_limit = 5;
  const auto s = shared_structure(a, b, o);
  CHECK_FALSE(s.exact);
  CHECK(s.common_edges == shared_structure_greedy(a, b).common_edges);
}

TEST_CASE("curriculum order check on a small curriculum") {
  AnalysisOptions o;
  o.channel_estimate = false;
  CurriculumSpec c{{make_task("micro_fixed"), make_task("micro_echo")}, 2, 1};
  const auto forward = curriculum_order_check(c, o);
  CHECK(forward.order_ok);
  CHECK(forward.violations.empty());
  std::swap(c.tasks[0], c.tasks[1]);
  const auto backward = curriculum_order_check(c, o);
  CHECK_FALSE(backward.order_ok);
  REQUIRE(backward.violations.size() == 1);
  CHECK(backward.violations[0].earlier == 0);
  CHECK(backward.violations[0].later == 1);
  for (const auto& t : backward.tasks) {
    CHECK(t.c_mu >= 0.0);
    CHECK(t.c_mu <= t.c0 + 1e-9);
  }
}

TEST_CASE("tasks above the state cap are reported, not analyzed") {
  AnalysisOptions o;
  o.channel_estimate = false;
  o.model.state_cap = 50;
  const auto r = curriculum_order_check({{make_task("micro_fixed"), make_task("mini_membership")}, 2, 1}, o);
  CHECK(r.unanalyzed == std::vector<std::string>{"mini_membership"});
  CHECK(r.order_ok);
  CHECK_FALSE(r.tasks[1].analyzed);
  CHECK_FALSE(r.tasks[1].error.empty());
}

}

#include "doctest.h"

#include <regex>

#include "fixtures.hpp"
#include "gradual/dot.hpp"
#include "gradual/task_library.hpp"
#include "gradual/task_model.hpp"

using namespace gradual;

namespace {

std::size_t count(const std::string& text, const std::regex& re) {
  return std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator());
}

const std::regex kNode(R"(\n  s\d+ \[label=)");
const std::regex kEdge(R"( -> )");

// d0 -a,0-> d1 -b,0-> q; q loops on errors and returns to d0 on success.
MachineData description_chain() {
  MachineData d;
  d.inputs = {"*"};
  d.outputs = {"a,0", "b,0", "c,+1", "c,-1"};
  d.states = {"d0", "d1", "q"};
  d.transitions = {{0, 0, 0, 1, 1.0},
                   {1, 0, 1, 2, 1.0},
                   {2, 0, 2, 0, 0.5, TransitionKind::instance_switch},
                   {2, 0, 3, 2, 0.5, TransitionKind::error}};
  return d;
}

}  // namespace

TEST_SUITE("dot") {

TEST_CASE("golden mean has two nodes and three edges") {
  const std::string dot = export_dot(EpsilonMachine(fixtures::golden_mean()));
  CHECK(count(dot, kNode) == 2);
  CHECK(count(dot, kEdge) == 3);
  CHECK(dot.find("s0 -> s1 [label=\"1 0.5\"]") != std::string::npos);
  CHECK(dot.rfind("digraph \"machine\" {", 0) == 0);
}

TEST_CASE("output is byte-identical for equal machines") {
  const TaskSpec t = make_task("micro_group_A22");
  const std::string a = export_dot(transducer_from_task(t));
  const std::string b = export_dot(transducer_from_task(t));
  CHECK(a == b);
  CHECK(a.find("|") != std::string::npos);
}

TEST_CASE("filters") {
  const EpsilonTransducer m(description_chain());
  DotOptions o;
  CHECK(visible_edge_count(m, o) == 4);
  o.hide_errors = true;
  CHECK(visible_edge_count(m, o) == 3);
  o.hide_switches = true;
  CHECK(visible_edge_count(m, o) == 2);
  const std::string dot = export_dot(m);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("(c,-1|*)") != std::string::npos);
}

TEST_CASE("description chains merge into one node") {
  const EpsilonTransducer m(description_chain());
  DotOptions o;
  o.merge_descriptions = true;
  const std::string dot = export_dot(m, o);
  CHECK(count(dot, kNode) == 2);
  CHECK(count(dot, kEdge) == 3);
  CHECK(visible_edge_count(m, o) == 3);
  CHECK(count(export_dot(m), kNode) == 3);
}

TEST_CASE("probabilities can be omitted and names are escaped") {
  MachineData d = fixtures::golden_mean();
  d.states[0] = "say \"hi\"";
  DotOptions o;
  o.probabilities = false;
  o.graph_name = "g\nh";
  const std::string dot = export_dot(EpsilonMachine(d), o);
  CHECK(dot.find("label=\"1\"") != std::string::npos);
  CHECK(dot.find("say \\\"hi\\\"") != std::string::npos);
  CHECK(dot.find("g\\nh") != std::string::npos);
}

}

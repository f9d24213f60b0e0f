#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradual/complexity.hpp"
#include "gradual/machine.hpp"
#include "gradual/task.hpp"
#include "gradual/task_model.hpp"

namespace gradual {

struct TaskComplexity {
  std::string id;
  bool analyzed = false;
  std::string error;  // set when the model could not be built
  std::vector<std::uint64_t> seeds;
  std::size_t states = 0;
  double c0 = 0.0;
  double c_mu = 0.0;  // under uniform i.i.d. actions
  std::optional<ChannelEstimate> channel;
};

struct OrderViolation {
  std::size_t earlier = 0;  // task positions in the curriculum
  std::size_t later = 0;
  double earlier_c_mu = 0.0;
  double later_c_mu = 0.0;
};

struct ComplexityReport {
  std::vector<TaskComplexity> tasks;
  bool order_ok = true;
  std::vector<OrderViolation> violations;
  std::vector<std::string> unanalyzed;
};

struct AnalysisOptions {
  TaskModelOptions model;
  ChannelSearchOptions channel;
  bool channel_estimate = true;
  bool parallel = true;
  double tie_tolerance = 1e-9;
};

// order_ok iff C_mu is non-decreasing along the analyzed tasks (ties
// allowed).  Tasks whose model exceeds the state cap are listed as
// unanalyzed and skipped in the comparison.
ComplexityReport curriculum_order_check(const CurriculumSpec& curriculum, const AnalysisOptions& options = {});

struct SharedStructureOptions {
  bool hide_errors = false;
  bool hide_switches = false;
  std::size_t exact_state_limit = 30;
  std::size_t node_limit = 2'000'000;
};

struct SharedStructureScore {
  std::pair<std::string, std::string> pair;
  double score = 0.0;
  std::size_t common_edges = 0;
  // State of the first machine -> state of the second.
  std::vector<std::pair<std::size_t, std::size_t>> witness;
  bool exact = true;
};

// Largest common label-preserving edge substructure: an injective partial
// state map f maximizing the edges (u, x, y, v) of `a` for which
// (f(u), x, y, f(v)) is an edge of `b`; labels compare by name.  The score
// divides by the larger edge count.  Machines above exact_state_limit, and
// searches that hit node_limit, fall back to the greedy matching and are
// flagged inexact.
SharedStructureScore shared_structure(const Machine& a, const Machine& b,
                                      const SharedStructureOptions& options = {},
                                      std::pair<std::string, std::string> names = {"a", "b"});

// Label-guided greedy matching alone; a lower bound of the exact score.
// Both functions work in a canonical orientation of the pair, so swapping
// the arguments gives the same score.
SharedStructureScore shared_structure_greedy(const Machine& a, const Machine& b,
                                             const SharedStructureOptions& options = {},
                                             std::pair<std::string, std::string> names = {"a", "b"});

}  // namespace gradual

#pragma once

#include <string>

#include "gradual/machine.hpp"

namespace gradual {

struct DotOptions {
  std::string graph_name = "machine";
  // Drop transitions whose output carries reward -1.
  bool hide_errors = false;
  bool hide_switches = false;
  // Collapse chains of reward-0 states with a single way in and out into
  // one node, as done for spelled-out task descriptions.
  bool merge_descriptions = false;
  bool probabilities = true;
};

// Graphviz text.  Transducer edges are labelled "(y|x)", which for task
// models reads "(o,r|a)"; process edges are labelled "y".  Output is
// byte-identical for equal machines and options.
std::string export_dot(const Machine& machine, const DotOptions& options = {});

// Number of edges export_dot would draw.
std::size_t visible_edge_count(const Machine& machine, const DotOptions& options = {});

}  // namespace gradual

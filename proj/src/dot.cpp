#include "gradual/dot.hpp"

#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace gradual {
namespace {

bool ends_with(const std::string& s, const char* tail) {
  const std::string t(tail);
  return s.size() >= t.size() && s.compare(s.size() - t.size(), t.size(), t) == 0;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

bool is_process(const Machine& m) { return m.input_count() == 1 && m.inputs()[0].empty(); }

struct Layout {
  std::vector<const Transition*> edges;  // drawn edges
  std::vector<std::size_t> group;        // state -> representative
  std::vector<std::string> node_label;   // per representative
};

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

Layout layout(const Machine& m, const DotOptions& o) {
  Layout l;
  std::vector<const Transition*> visible;
  for (const auto& t : m.transitions()) {
    const std::string& y = m.outputs()[t.output];
    if (o.hide_switches && t.kind == TransitionKind::instance_switch) continue;
    if (o.hide_errors && (t.kind == TransitionKind::error || ends_with(y, ",-1"))) continue;
    visible.push_back(&t);
  }
  const std::size_t n = m.state_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::string> inner(n);

  if (o.merge_descriptions) {
    std::vector<std::set<std::size_t>> succ(n), pred(n);
    std::vector<bool> quiet(n, true);
    for (const auto* t : visible) {
      succ[t->from].insert(t->to);
      pred[t->to].insert(t->from);
      if (!ends_with(m.outputs()[t->output], ",0")) quiet[t->from] = false;
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (!quiet[s] || succ[s].size() != 1) continue;
      const std::size_t t = *succ[s].begin();
      if (t == s || pred[t].size() != 1) continue;
      parent[find(parent, t)] = find(parent, s);
    }
  }
  l.group.resize(n);
  for (std::size_t s = 0; s < n; ++s) l.group[s] = find(parent, s);
  // Representatives are the lowest-numbered member for stable ids.
  std::vector<std::size_t> lowest(n, n);
  for (std::size_t s = 0; s < n; ++s) lowest[l.group[s]] = std::min(lowest[l.group[s]], s);
  for (std::size_t s = 0; s < n; ++s) l.group[s] = lowest[l.group[s]];

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t s = 0; s < n; ++s) members[l.group[s]].push_back(s);
  l.node_label.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    if (members[g].empty()) continue;
    if (members[g].size() == 1) {
      l.node_label[g] = m.states()[g];
      continue;
    }
    std::string said;
    for (const auto* t : visible)
      if (l.group[t->from] == g && l.group[t->to] == g) {
        const std::string& y = m.outputs()[t->output];
        said += y.substr(0, y.find(','));
      }
    l.node_label[g] = m.states()[members[g].front()] + ".." + m.states()[members[g].back()] + "\n" + said;
  }
  for (const auto* t : visible)
    if (!(o.merge_descriptions && l.group[t->from] == l.group[t->to] && t->from != t->to)) l.edges.push_back(t);
  return l;
}

}  // namespace

std::size_t visible_edge_count(const Machine& machine, const DotOptions& options) {
  return layout(machine, options).edges.size();
}

std::string export_dot(const Machine& machine, const DotOptions& options) {
  const Layout l = layout(machine, options);
  const bool process = is_process(machine);
  std::ostringstream out;
  out << "digraph \"" << escape(options.graph_name) << "\" {\n";
  out << "  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t s = 0; s < machine.state_count(); ++s)
    if (l.group[s] == s) out << "  s" << s << " [label=\"" << escape(l.node_label[s]) << "\"];\n";
  for (const auto* t : l.edges) {
    std::string label = process ? machine.outputs()[t->output]
                                : "(" + machine.outputs()[t->output] + "|" + machine.inputs()[t->input] + ")";
    if (options.probabilities) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.4g", t->p);
      label += buf;
    }
    out << "  s" << l.group[t->from] << " -> s" << l.group[t->to] << " [label=\"" << escape(label) << "\"";
    if (t->kind == TransitionKind::instance_switch) out << ", style=dashed";
    if (t->kind == TransitionKind::error) out << ", color=gray";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gradual

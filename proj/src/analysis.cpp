#include "gradual/analysis.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <unordered_set>

#include "gradual/errors.hpp"

namespace gradual {

namespace {

TaskComplexity analyze_task(const TaskSpec& task, const AnalysisOptions& options) {
  TaskComplexity tc;
  tc.id = task.id;
  tc.seeds = model_seeds(options.model);
  try {
    const EpsilonTransducer t = transducer_from_task(task, options.model);
    tc.states = t.state_count();
    tc.c0 = topological_complexity(t);
    tc.c_mu = input_dependent_complexity(t, InputProcess::uniform(t.input_count()));
    if (options.channel_estimate) tc.channel = channel_complexity_upper(t, options.channel);
    tc.analyzed = true;
  } catch (const StateExplosion& e) {
    tc.error = e.what();
  } catch (const NonErgodic& e) {
    tc.error = e.what();
  }
  return tc;
}

}  // namespace

ComplexityReport curriculum_order_check(const CurriculumSpec& curriculum, const AnalysisOptions& options) {
  validate(curriculum);
  ComplexityReport report;
  if (options.parallel) {
    std::vector<std::future<TaskComplexity>> jobs;
    for (const auto& task : curriculum.tasks)
      jobs.push_back(std::async(std::launch::async, [&task, &options] { return analyze_task(task, options); }));
    for (auto& j : jobs) report.tasks.push_back(j.get());
  } else {
    for (const auto& task : curriculum.tasks) report.tasks.push_back(analyze_task(task, options));
  }

  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < report.tasks.size(); ++i) {
    const auto& t = report.tasks[i];
    if (!t.analyzed) {
      report.unanalyzed.push_back(t.id);
      continue;
    }
    if (prev && report.tasks[*prev].c_mu > t.c_mu + options.tie_tolerance)
      report.violations.push_back({*prev, i, report.tasks[*prev].c_mu, t.c_mu});
    prev = i;
  }
  report.order_ok = report.violations.empty();
  return report;
}

namespace {

struct Edge {
  std::size_t from;
  std::size_t label;
  std::size_t to;
};

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out, in;  // edge indices
};

bool hidden(const Machine& m, const Transition& t, const SharedStructureOptions& o) {
  if (o.hide_switches && t.kind == TransitionKind::instance_switch) return true;
  if (o.hide_errors) {
    const std::string& y = m.outputs()[t.output];
    if (t.kind == TransitionKind::error || (y.size() >= 3 && y.compare(y.size() - 3, 3, ",-1") == 0)) return true;
  }
  return false;
}

Graph graph_of(const Machine& m, const SharedStructureOptions& o,
               std::map<std::pair<std::string, std::string>, std::size_t>& labels) {
  Graph g;
  g.n = m.state_count();
  g.out.resize(g.n);
  g.in.resize(g.n);
  for (const auto& t : m.transitions()) {
    if (hidden(m, t, o)) continue;
    const auto key = std::make_pair(m.inputs()[t.input], m.outputs()[t.output]);
    const std::size_t label = labels.try_emplace(key, labels.size()).first->second;
    g.out[t.from].push_back(g.edges.size());
    g.in[t.to].push_back(g.edges.size());
    g.edges.push_back({t.from, label, t.to});
  }
  return g;
}

class Matcher {
 public:
  Matcher(const Graph& a, const Graph& b, std::size_t labels) : a_(a), b_(b), labels_(labels) {
    for (const auto& e : b.edges) b_set_.insert(code(e.from, e.label, e.to));
    label_a_.assign(labels, 0);
    label_b_.assign(labels, 0);
    for (const auto& e : a.edges) ++label_a_[e.label];
    for (const auto& e : b.edges) ++label_b_[e.label];
  }

  bool has_b(std::size_t w, std::size_t label, std::size_t z) const {
    return b_set_.count(code(w, label, z)) > 0;
  }

  std::size_t count(const std::vector<std::size_t>& f) const {
    std::size_t c = 0;
    for (const auto& e : a_.edges)
      if (f[e.from] != Machine::npos && f[e.to] != Machine::npos && has_b(f[e.from], e.label, f[e.to])) ++c;
    return c;
  }

  std::vector<std::size_t> greedy() const {
    std::vector<std::size_t> f(a_.n, Machine::npos);
    std::vector<bool> used(b_.n, false);
    auto labels_around = [&](const Graph& g, std::size_t s) {
      std::vector<std::size_t> out_l, in_l;
      for (auto e : g.out[s]) out_l.push_back(g.edges[e].label);
      for (auto e : g.in[s]) in_l.push_back(g.edges[e].label);
      std::sort(out_l.begin(), out_l.end());
      std::sort(in_l.begin(), in_l.end());
      return std::make_pair(out_l, in_l);
    };
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> la, lb;
    for (std::size_t u = 0; u < a_.n; ++u) la.push_back(labels_around(a_, u));
    for (std::size_t w = 0; w < b_.n; ++w) lb.push_back(labels_around(b_, w));
    auto overlap = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
      std::size_t i = 0, j = 0, c = 0;
      while (i < x.size() && j < y.size()) {
        if (x[i] == y[j]) {
          ++c;
          ++i;
          ++j;
        } else if (x[i] < y[j]) {
          ++i;
        } else {
          ++j;
        }
      }
      return c;
    };

    for (;;) {
      std::size_t best = 0, bu = 0, bw = 0;
      for (std::size_t u = 0; u < a_.n; ++u) {
        if (f[u] != Machine::npos) continue;
        for (std::size_t w = 0; w < b_.n; ++w) {
          if (used[w]) continue;
          const std::size_t o = overlap(la[u].first, lb[w].first) + overlap(la[u].second, lb[w].second);
          if (o > best) {
            best = o;
            bu = u;
            bw = w;
          }
        }
      }
      if (best == 0) break;
      std::vector<std::pair<std::size_t, std::size_t>> queue{{bu, bw}};
      f[bu] = bw;
      used[bw] = true;
      while (!queue.empty()) {
        const auto [u, w] = queue.back();
        queue.pop_back();
        for (auto ei : a_.out[u]) {
          const Edge& e = a_.edges[ei];
          if (f[e.to] != Machine::npos) continue;
          for (auto ej : b_.out[w]) {
            const Edge& d = b_.edges[ej];
            if (d.label == e.label && !used[d.to]) {
              f[e.to] = d.to;
              used[d.to] = true;
              queue.push_back({e.to, d.to});
              break;
            }
          }
        }
        for (auto ei : a_.in[u]) {
          const Edge& e = a_.edges[ei];
          if (f[e.from] != Machine::npos) continue;
          for (auto ej : b_.in[w]) {
            const Edge& d = b_.edges[ej];
            if (d.label == e.label && !used[d.from]) {
              f[e.from] = d.from;
              used[d.from] = true;
              queue.push_back({e.from, d.from});
              break;
            }
          }
        }
      }
    }
    return f;
  }

  // Branch and bound seeded with `incumbent`.  Returns false if the node
  // limit stopped the search.
  bool exact(std::vector<std::size_t>& incumbent, std::size_t node_limit) {
    best_ = count(incumbent);
    best_f_ = incumbent;
    node_limit_ = node_limit;
    nodes_ = 0;
    aborted_ = false;

    // Visit order: most connected first, then by adjacency to placed states.
    std::vector<bool> placed(a_.n, false);
    order_.clear();
    auto degree = [&](std::size_t u) { return a_.out[u].size() + a_.in[u].size(); };
    while (order_.size() < a_.n) {
      std::size_t pick = Machine::npos, pick_links = 0;
      for (std::size_t u = 0; u < a_.n; ++u) {
        if (placed[u]) continue;
        std::size_t links = 0;
        for (auto e : a_.out[u]) links += placed[a_.edges[e].to];
        for (auto e : a_.in[u]) links += placed[a_.edges[e].from];
        if (pick == Machine::npos || links > pick_links ||
            (links == pick_links && degree(u) > degree(pick))) {
          pick = u;
          pick_links = links;
        }
      }
      placed[pick] = true;
      order_.push_back(pick);
    }
    position_.assign(a_.n, 0);
    for (std::size_t i = 0; i < a_.n; ++i) position_[order_[i]] = i;
    // Edges closed when the later endpoint (in visit order) is assigned.
    closing_.assign(a_.n, {});
    for (std::size_t ei = 0; ei < a_.edges.size(); ++ei) {
      const Edge& e = a_.edges[ei];
      closing_[std::max(position_[e.from], position_[e.to])].push_back(ei);
    }

    f_.assign(a_.n, Machine::npos);
    used_.assign(b_.n, false);
    open_a_ = label_a_;
    matched_b_.assign(labels_, 0);
    search(0, 0);
    incumbent = best_f_;
    return !aborted_;
  }

 private:
  static std::uint64_t code(std::size_t w, std::size_t label, std::size_t z) {
    return (static_cast<std::uint64_t>(w) << 42) ^ (static_cast<std::uint64_t>(z) << 21) ^ label;
  }

  std::size_t bound(std::size_t current) const {
    std::size_t b = current;
    for (std::size_t l = 0; l < labels_; ++l) b += std::min(open_a_[l], label_b_[l] - matched_b_[l]);
    return b;
  }

  void search(std::size_t depth, std::size_t current) {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    if (current > best_) {
      best_ = current;
      best_f_ = f_;
    }
    if (depth == a_.n) return;
    const std::size_t u = order_[depth];
    for (auto ei : closing_[depth]) --open_a_[a_.edges[ei].label];

    // Candidates by immediate gain, then leaving u unmapped.
    std::vector<std::pair<std::size_t, std::size_t>> cands;
    for (std::size_t w = 0; w < b_.n; ++w) {
      if (used_[w]) continue;
      f_[u] = w;
      std::size_t gain = 0;
      for (auto ei : closing_[depth]) {
        const Edge& e = a_.edges[ei];
        if (f_[e.from] != Machine::npos && f_[e.to] != Machine::npos && has_b(f_[e.from], e.label, f_[e.to])) ++gain;
      }
      cands.push_back({gain, w});
    }
    f_[u] = Machine::npos;
    std::stable_sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

    for (const auto& [gain, w] : cands) {
      f_[u] = w;
      used_[w] = true;
      for (auto ei : closing_[depth]) {
        const Edge& e = a_.edges[ei];
        if (f_[e.from] != Machine::npos && f_[e.to] != Machine::npos && has_b(f_[e.from], e.label, f_[e.to]))
          ++matched_b_[e.label];
      }
      if (bound(current + gain) > best_) search(depth + 1, current + gain);
      for (auto ei : closing_[depth]) {
        const Edge& e = a_.edges[ei];
        if (f_[e.from] != Machine::npos && f_[e.to] != Machine::npos && has_b(f_[e.from], e.label, f_[e.to]))
          --matched_b_[e.label];
      }
      used_[w] = false;
      f_[u] = Machine::npos;
      if (aborted_) break;
    }
    if (!aborted_ && bound(current) > best_) search(depth + 1, current);
    for (auto ei : closing_[depth]) ++open_a_[a_.edges[ei].label];
  }

  const Graph& a_;
  const Graph& b_;
  std::size_t labels_;
  std::unordered_set<std::uint64_t> b_set_;
  std::vector<std::size_t> label_a_, label_b_;

  std::vector<std::size_t> order_, position_;
  std::vector<std::vector<std::size_t>> closing_;
  std::vector<std::size_t> f_, best_f_;
  std::vector<bool> used_;
  std::vector<std::size_t> open_a_, matched_b_;
  std::size_t best_ = 0;
  std::size_t nodes_ = 0, node_limit_ = 0;
  bool aborted_ = false;
};

// Both directions of a pair are computed in one canonical orientation so
// the score cannot depend on argument order.
bool swapped_orientation(const Machine& a, const Machine& b) {
  const auto ka = std::make_tuple(a.state_count(), a.transitions().size());
  const auto kb = std::make_tuple(b.state_count(), b.transitions().size());
  if (ka != kb) return ka > kb;
  return serialize(a) > serialize(b);
}

SharedStructureScore score_pair(const Machine& a, const Machine& b, const SharedStructureOptions& options,
                                std::pair<std::string, std::string> names, bool allow_exact) {
  const bool swap = swapped_orientation(a, b);
  const Machine& x = swap ? b : a;
  const Machine& y = swap ? a : b;
  std::map<std::pair<std::string, std::string>, std::size_t> labels;
  const Graph gx = graph_of(x, options, labels);
  const Graph gy = graph_of(y, options, labels);
  Matcher m(gx, gy, labels.size());

  std::vector<std::size_t> f = m.greedy();
  SharedStructureScore s;
  s.pair = std::move(names);
  s.exact = false;
  if (allow_exact && x.state_count() <= options.exact_state_limit && y.state_count() <= options.exact_state_limit)
    s.exact = m.exact(f, options.node_limit);
  s.common_edges = m.count(f);
  const std::size_t denom = std::max(gx.edges.size(), gy.edges.size());
  s.score = denom == 0 ? 1.0 : static_cast<double>(s.common_edges) / static_cast<double>(denom);
  for (std::size_t u = 0; u < f.size(); ++u)
    if (f[u] != Machine::npos) s.witness.push_back(swap ? std::make_pair(f[u], u) : std::make_pair(u, f[u]));
  std::sort(s.witness.begin(), s.witness.end());
  return s;
}

}  // namespace

SharedStructureScore shared_structure(const Machine& a, const Machine& b, const SharedStructureOptions& options,
                                      std::pair<std::string, std::string> names) {
  return score_pair(a, b, options, std::move(names), true);
}

SharedStructureScore shared_structure_greedy(const Machine& a, const Machine& b,
                                             const SharedStructureOptions& options,
                                             std::pair<std::string, std::string> names) {
  return score_pair(a, b, options, std::move(names), false);
}

}  // namespace gradual

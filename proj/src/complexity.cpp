#include "gradual/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "gradual/errors.hpp"

namespace gradual {
namespace {

constexpr std::size_t kDenseLimit = 1500;
constexpr double kResidualTarget = 1e-10;

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj,
                                            std::size_t& count) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge
  std::size_t next_index = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e == 0 && index[v] == unset) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (e < adj[v].size()) {
        const std::size_t w = adj[v][e++];
        if (index[w] == unset) {
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

double residual(std::size_t n, const std::vector<ChainEntry>& entries, const std::vector<double>& pi) {
  std::vector<double> next(n, 0.0);
  for (const auto& e : entries) next[e.to] += pi[e.from] * e.p;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(next[i] - pi[i]));
  return worst;
}

// Lazy power iteration (I + P) / 2, which shares the stationary vector of P
// and is aperiodic.
std::vector<double> power_iterate(const std::vector<std::size_t>& members,
                                  const std::vector<std::size_t>& local,
                                  const std::vector<ChainEntry>& entries, std::vector<double> x) {
  const std::size_t m = members.size();
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) y[i] = 0.5 * x[i];
    for (const auto& e : entries) {
      const std::size_t a = local[e.from];
      if (a == Machine::npos) continue;
      y[local[e.to]] += 0.5 * x[a] * e.p;
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x = std::move(y);
    if (diff < 1e-15) break;
  }
  return x;
}

}  // namespace

double shannon_entropy(std::span<const double> dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw InvalidDistribution("probability below zero or NaN in distribution");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidDistribution("distribution sums to " + std::to_string(sum) + ", not 1");
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log2(p);
  return h < 0.0 ? 0.0 : h;
}

StateDistribution stationary_of_chain(std::size_t n, const std::vector<ChainEntry>& entries) {
  if (n == 0) throw ValidationError("chain has no states");
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : entries)
    if (e.p > 0.0) adj[e.from].push_back(e.to);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::size_t ncomp = 0;
  const auto comp = strongly_connected(adj, ncomp);
  std::vector<bool> closed(ncomp, true);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w : adj[v])
      if (comp[w] != comp[v]) closed[comp[v]] = false;

  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t v = 0; v < n; ++v)
    if (closed[comp[v]]) classes[comp[v]].push_back(v);
  if (classes.size() != 1) {
    std::vector<std::vector<std::size_t>> listed;
    for (auto& [c, members] : classes) listed.push_back(members);
    std::sort(listed.begin(), listed.end());
    throw NonErgodic(std::move(listed));
  }
  const std::vector<std::size_t>& members = classes.begin()->second;
  const std::size_t m = members.size();
  std::vector<std::size_t> local(n, Machine::npos);
  for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;

  std::vector<double> x(m, 0.0);
  if (m == 1) {
    x[0] = 1.0;
  } else if (m <= kDenseLimit) {
    // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (const auto& e : entries) {
      const std::size_t i = local[e.from];
      if (i == Machine::npos) continue;
      a(static_cast<Eigen::Index>(local[e.to]), static_cast<Eigen::Index>(i)) += e.p;
    }
    a.row(static_cast<Eigen::Index>(m - 1)).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    b(static_cast<Eigen::Index>(m - 1)) = 1.0;
    const Eigen::VectorXd sol = a.partialPivLu().solve(b);
    for (std::size_t i = 0; i < m; ++i) x[i] = sol(static_cast<Eigen::Index>(i));
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    const auto last = static_cast<Eigen::Index>(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) trips.emplace_back(i, i, -1.0);
    for (const auto& e : entries) {
      const std::size_t i = local[e.from];
      if (i == Machine::npos) continue;
      const auto row = static_cast<Eigen::Index>(local[e.to]);
      if (row != last) trips.emplace_back(row, static_cast<Eigen::Index>(i), e.p);
    }
    for (std::size_t i = 0; i < m; ++i) trips.emplace_back(last, static_cast<Eigen::Index>(i), 1.0);
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    b(last) = 1.0;
    if (lu.info() == Eigen::Success) {
      const Eigen::VectorXd sol = lu.solve(b);
      for (std::size_t i = 0; i < m; ++i) x[i] = sol(static_cast<Eigen::Index>(i));
    } else {
      std::fill(x.begin(), x.end(), std::numeric_limits<double>::quiet_NaN());
    }
  }

  auto clean = [&](std::vector<double>& v) {
    for (double& p : v)
      if (p < 0.0 && p > -1e-12) p = 0.0;
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    if (s > 0.0 && std::isfinite(s))
      for (double& p : v) p /= s;
  };
  clean(x);

  auto expand = [&](const std::vector<double>& v) {
    std::vector<double> full(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) full[members[i]] = v[i];
    return full;
  };
  std::vector<double> pi = expand(x);
  const bool bad = std::any_of(x.begin(), x.end(), [](double p) { return !(p >= 0.0); });
  if (bad || residual(n, entries, pi) > kResidualTarget) {
    std::vector<double> start(m, 1.0 / static_cast<double>(m));
    if (!bad) start = x;
    x = power_iterate(members, local, entries, std::move(start));
    clean(x);
    pi = expand(x);
  }
  return {std::move(pi)};
}

StateDistribution stationary_distribution(const EpsilonMachine& machine) {
  std::vector<ChainEntry> entries;
  entries.reserve(machine.transitions().size());
  for (const auto& t : machine.transitions()) entries.push_back({t.from, t.to, t.p});
  return stationary_of_chain(machine.state_count(), entries);
}

double stationary_residual(const EpsilonMachine& machine, const StateDistribution& pi) {
  std::vector<ChainEntry> entries;
  for (const auto& t : machine.transitions()) entries.push_back({t.from, t.to, t.p});
  return residual(machine.state_count(), entries, pi.weights);
}

double statistical_complexity(const EpsilonMachine& machine) {
  return shannon_entropy(stationary_distribution(machine).weights);
}

InputProcess InputProcess::iid(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidDistribution("input weight below zero or NaN");
    sum += w;
  }
  if (weights.empty() || std::abs(sum - 1.0) > 1e-9)
    throw InvalidDistribution("input distribution must be non-empty and sum to 1");
  return InputProcess(std::move(weights));
}

InputProcess InputProcess::uniform(std::size_t input_count) {
  if (input_count == 0) throw InvalidDistribution("input alphabet is empty");
  return iid(std::vector<double>(input_count, 1.0 / static_cast<double>(input_count)));
}

InputProcess InputProcess::machine(EpsilonMachine process) { return InputProcess(std::move(process)); }

StateDistribution driven_state_distribution(const EpsilonTransducer& transducer, const InputProcess& input) {
  const std::size_t n = transducer.state_count();
  if (input.is_iid()) {
    const auto& q = input.weights();
    if (q.size() != transducer.input_count())
      throw ValidationError("i.i.d. input has " + std::to_string(q.size()) + " weights for " +
                            std::to_string(transducer.input_count()) + " transducer inputs");
    std::vector<ChainEntry> entries;
    for (const auto& t : transducer.transitions())
      if (q[t.input] > 0.0) entries.push_back({t.from, t.to, q[t.input] * t.p});
    return stationary_of_chain(n, entries);
  }

  const EpsilonMachine& proc = input.process();
  std::vector<std::size_t> to_input(proc.output_count(), Machine::npos);
  for (std::size_t y = 0; y < proc.output_count(); ++y) {
    const auto& in = transducer.inputs();
    const auto it = std::find(in.begin(), in.end(), proc.outputs()[y]);
    if (it == in.end())
      throw ValidationError("input process emits '" + proc.outputs()[y] + "', not a transducer input");
    to_input[y] = static_cast<std::size_t>(it - in.begin());
  }
  const std::size_t nu = proc.state_count();
  std::vector<ChainEntry> entries;
  for (const auto& it : proc.transitions())
    for (std::size_t s = 0; s < n; ++s)
      for (const auto& tt : transducer.outgoing(s, to_input[it.output]))
        entries.push_back({it.from * n + s, it.to * n + tt.to, it.p * tt.p});
  const auto joint = stationary_of_chain(nu * n, entries);
  std::vector<double> marginal(n, 0.0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t s = 0; s < n; ++s) marginal[s] += joint.weights[u * n + s];
  return {std::move(marginal)};
}

double input_dependent_complexity(const EpsilonTransducer& transducer, const InputProcess& input) {
  return shannon_entropy(driven_state_distribution(transducer, input).weights);
}

namespace {

// All compositions of `steps` into k parts, as weights step/steps.
void enumerate_grid(std::size_t k, std::size_t steps, const std::function<void(const std::vector<double>&)>& f) {
  std::vector<std::size_t> parts(k, 0);
  std::vector<double> w(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == k) {
      parts[i] = left;
      for (std::size_t j = 0; j < k; ++j) w[j] = static_cast<double>(parts[j]) / static_cast<double>(steps);
      f(w);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      parts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
}

double grid_size(std::size_t k, std::size_t steps) {
  // C(steps + k - 1, k - 1)
  double r = 1.0;
  for (std::size_t i = 1; i < k; ++i) r = r * static_cast<double>(steps + i) / static_cast<double>(i);
  return r;
}

}  // namespace

ChannelEstimate channel_complexity_upper(const EpsilonTransducer& transducer, const ChannelSearchOptions& options) {
  if (!(options.resolution > 0.0 && options.resolution <= 1.0))
    throw ValidationError("grid resolution must be in (0, 1]");
  ChannelEstimate est;
  est.topological_bound = topological_complexity(transducer);
  const std::size_t k = transducer.input_count();
  est.maximizing_input.assign(k, 1.0 / static_cast<double>(k));
  if (transducer.state_count() == 1) {
    est.resolution_used = options.resolution;
    return est;
  }

  std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / options.resolution)));
  while (steps > 1 && grid_size(k, steps) > static_cast<double>(options.max_grid_points)) --steps;
  est.resolution_used = 1.0 / static_cast<double>(steps);

  double best = -1.0;
  auto evaluate = [&](const std::vector<double>& w) -> double {
    ++est.evaluations;
    try {
      return input_dependent_complexity(transducer, InputProcess::iid(w));
    } catch (const NonErgodic&) {
      return -1.0;  // degenerate input, skipped
    }
  };
  auto consider = [&](const std::vector<double>& w) {
    const double v = evaluate(w);
    if (v > best) {
      best = v;
      est.maximizing_input = w;
    }
  };
  consider(est.maximizing_input);
  enumerate_grid(k, steps, consider);

  // Pairwise mass moves, halving the step down to refine_to.
  double delta = est.resolution_used / 2.0;
  std::size_t rounds = 0;
  while (k > 1 && delta >= options.refine_to && rounds < options.max_refine_rounds) {
    bool improved = false;
    for (std::size_t i = 0; i < k && !improved; ++i)
      for (std::size_t j = 0; j < k && !improved; ++j) {
        if (i == j || est.maximizing_input[j] < delta) continue;
        std::vector<double> w = est.maximizing_input;
        w[i] += delta;
        w[j] -= delta;
        if (w[j] < 0.0) w[j] = 0.0;
        const double v = evaluate(w);
        if (v > best + 1e-13) {
          best = v;
          est.maximizing_input = w;
          improved = true;
        }
      }
    ++rounds;
    if (!improved) delta /= 2.0;
  }
  est.value = std::max(best, 0.0);
  return est;
}

double topological_complexity(const Machine& machine) {
  return std::log2(static_cast<double>(machine.state_count()));
}

}  // namespace gradual

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"

#include "gradual/random.hpp"

namespace fixtures {

using gradual::Transition;

namespace {

Transition tr(std::size_t from, std::size_t input, std::size_t output, std::size_t to, double p) {
  Transition t;
  t.from = from;
  t.input = input;
  t.output = output;
  t.to = to;
  t.p = p;
  return t;
}

}  // namespace

MachineData golden_mean() {
  MachineData d;
  d.outputs = {"0", "1"};
  d.states = {"A", "B"};
  d.transitions = {tr(0, 0, 0, 0, 0.5), tr(0, 0, 1, 1, 0.5), tr(1, 0, 0, 0, 1.0)};
  return d;
}

MachineData biased_coin(double p_one) {
  MachineData d;
  d.outputs = {"0", "1"};
  d.states = {"C"};
  d.transitions = {tr(0, 0, 0, 0, 1.0 - p_one), tr(0, 0, 1, 0, p_one)};
  return d;
}

MachineData period_two() {
  MachineData d;
  d.outputs = {"0", "1"};
  d.states = {"A", "B"};
  d.transitions = {tr(0, 0, 0, 1, 1.0), tr(1, 0, 1, 0, 1.0)};
  return d;
}

MachineData golden_mean_duplicated() {
  MachineData d;
  d.outputs = {"0", "1"};
  d.states = {"A", "B", "A'"};
  d.transitions = {tr(0, 0, 0, 2, 0.5), tr(0, 0, 1, 1, 0.5), tr(1, 0, 0, 0, 1.0),
                   tr(2, 0, 0, 0, 0.5), tr(2, 0, 1, 1, 0.5)};
  return d;
}

MachineData six_state_two_classes() {
  MachineData d;
  d.inputs = {"u", "v"};
  d.outputs = {"0", "1"};
  d.states = {"x0", "y0", "x1", "y1", "x2", "y2"};
  const std::size_t xs[] = {0, 2, 4};
  const std::size_t ys[] = {1, 3, 5};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t x = xs[i], y = ys[i];
    d.transitions.push_back(tr(x, 0, 0, ys[(i + 1) % 3], 0.5));
    d.transitions.push_back(tr(x, 0, 1, xs[(i + 2) % 3], 0.5));
    d.transitions.push_back(tr(x, 1, 0, xs[i], 1.0));
    d.transitions.push_back(tr(y, 0, 1, xs[(i + 1) % 3], 1.0));
    d.transitions.push_back(tr(y, 1, 0, ys[(i + 2) % 3], 0.25));
    d.transitions.push_back(tr(y, 1, 1, xs[i], 0.75));
  }
  return d;
}

MachineData delay_channel() {
  MachineData d;
  d.inputs = {"0", "1"};
  d.outputs = {"0", "1"};
  d.states = {"last0", "last1"};
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t x = 0; x < 2; ++x) d.transitions.push_back(tr(s, x, s, x, 1.0));
  return d;
}

MachineData random_unifilar(std::uint64_t seed, std::size_t states, std::size_t inputs, std::size_t outputs) {
  gradual::Rng rng(seed);
  MachineData d;
  if (inputs > 1) {
    d.inputs.clear();
    for (std::size_t x = 0; x < inputs; ++x) d.inputs.push_back("x" + std::to_string(x));
  }
  for (std::size_t y = 0; y < outputs; ++y) d.outputs.push_back(std::to_string(y));
  for (std::size_t s = 0; s < states; ++s) d.states.push_back("s" + std::to_string(s));
  for (std::size_t s = 0; s < states; ++s)
    for (std::size_t x = 0; x < inputs; ++x) {
      std::vector<std::size_t> ys(outputs);
      for (std::size_t y = 0; y < outputs; ++y) ys[y] = y;
      for (std::size_t i = outputs; i > 1; --i) std::swap(ys[i - 1], ys[rng.below(i)]);
      const std::size_t m = 1 + rng.below(outputs);
      std::vector<double> w(m);
      double total = 0.0;
      for (auto& v : w) total += (v = 0.05 + rng.uniform());
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t to = i == 0 ? (s + 1) % states : rng.below(states);
        d.transitions.push_back(tr(s, x, ys[i], to, w[i] / total));
      }
    }
  return d;
}

MachineData with_planted_duplicates(MachineData base, std::uint64_t seed, std::size_t planted) {
  gradual::Rng rng(seed);
  for (std::size_t k = 0; k < planted; ++k) {
    const std::size_t n = base.states.size();
    const std::size_t j = rng.below(n);
    base.states.push_back(base.states[j] + "'");
    std::vector<Transition> copies;
    for (const auto& t : base.transitions)
      if (t.from == j) {
        Transition c = t;
        c.from = n;
        copies.push_back(c);
      }
    for (auto& t : base.transitions)
      if (t.to == j && rng.below(2) == 0) t.to = n;
    base.transitions.insert(base.transitions.end(), copies.begin(), copies.end());
  }
  return base;
}

std::vector<MachineData> minimization_corpus() {
  std::vector<MachineData> corpus = {golden_mean(), golden_mean_duplicated(), biased_coin(0.3), period_two(),
                                     six_state_two_classes(), delay_channel()};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    gradual::Rng rng(1000 + seed);
    const std::size_t n = 2 + rng.below(3);
    const std::size_t inputs = 1 + rng.below(2);
    const std::size_t outputs = inputs == 1 ? 2 + rng.below(2) : 2;
    const std::size_t planted = 1 + rng.below(8 - n);
    corpus.push_back(with_planted_duplicates(random_unifilar(seed, n, inputs, outputs), seed + 77, planted));
  }
  return corpus;
}

std::map<std::pair<Word, Word>, double> word_distribution(const MachineData& m, std::size_t start,
                                                          std::size_t length) {
  std::map<std::pair<Word, Word>, double> out;
  Word xs, ys;
  std::function<void(std::size_t, double)> walk = [&](std::size_t s, double p) {
    if (xs.size() == length) {
      out[{xs, ys}] += p;
      return;
    }
    for (std::size_t x = 0; x < m.inputs.size(); ++x) {
      xs.push_back(x);
      for (const auto& t : m.transitions) {
        if (t.from != s || t.input != x || t.p == 0.0) continue;
        ys.push_back(t.output);
        walk(t.to, p * t.p);
        ys.pop_back();
      }
      xs.pop_back();
    }
  };
  walk(start, 1.0);
  return out;
}

bool depth_equivalent(const MachineData& a, std::size_t sa, const MachineData& b, std::size_t sb,
                      std::size_t depth, double tol) {
  for (std::size_t len = 1; len <= depth; ++len) {
    const auto da = word_distribution(a, sa, len);
    const auto db = word_distribution(b, sb, len);
    for (const auto& [k, p] : da) {
      const auto it = db.find(k);
      if (std::abs(p - (it == db.end() ? 0.0 : it->second)) > tol) return false;
    }
    for (const auto& [k, p] : db)
      if (!da.count(k) && std::abs(p) > tol) return false;
  }
  return true;
}

std::uint64_t solve_reference(const std::vector<int>& script, int r_star, std::uint64_t hard) {
  std::uint64_t t = 0;
  int r_plus = 0;
  do {
    const int r = script[std::min<std::size_t>(t, script.size() - 1)];
    t = t + 1;
    if (r == 1) r_plus = r_plus + 1;
    if (r == -1) r_plus = 0;
  } while (!(r_plus == r_star || t == hard));
  return t;
}

std::uint64_t curriculum_reference(std::size_t tasks, int n_s, const std::vector<std::uint64_t>& soft,
                                   const std::function<std::pair<std::uint64_t, bool>(std::size_t, std::size_t)>& steps) {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < tasks; ++j) {
    int successes = 0;
    std::size_t i = 0;
    while (successes < n_s) {
      const std::uint64_t t = steps(j, i).first;
      total = total + t;
      if (t <= soft[j]) {
        successes = successes + 1;
      } else {
        successes = 0;
      }
      i = i + 1;
    }
  }
  return total;
}

std::size_t brute_force_common_edges(const gradual::Machine& a, const gradual::Machine& b) {
  using E = std::tuple<std::size_t, std::string, std::string, std::size_t>;
  std::vector<E> ea;
  std::set<E> eb;
  for (const auto& t : a.transitions()) ea.emplace_back(t.from, a.inputs()[t.input], a.outputs()[t.output], t.to);
  for (const auto& t : b.transitions()) eb.emplace(t.from, b.inputs()[t.input], b.outputs()[t.output], t.to);
  const std::size_t na = a.state_count(), nb = b.state_count();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> f(na, none);
  std::vector<bool> used(nb, false);
  std::size_t best = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t u) {
    if (u == na) {
      std::size_t c = 0;
      for (const auto& [p, x, y, q] : ea)
        if (f[p] != none && f[q] != none && eb.count({f[p], x, y, f[q]})) ++c;
      best = std::max(best, c);
      return;
    }
    f[u] = none;
    rec(u + 1);
    for (std::size_t w = 0; w < nb; ++w) {
      if (used[w]) continue;
      used[w] = true;
      f[u] = w;
      rec(u + 1);
      f[u] = none;
      used[w] = false;
    }
  };
  rec(0);
  return best;
}

WipingMemorizer::WipingMemorizer(std::uint64_t seed, std::vector<gradual::Symbol> alphabet)
    : inner_(seed, std::move(alphabet)) {}

gradual::Symbol WipingMemorizer::step(gradual::Reward reward, gradual::Symbol observation) {
  if (seen_.insert(observation.value()).second) inner_.forget();
  return inner_.step(reward, observation);
}

gradual::AgentSnapshot WipingMemorizer::snapshot() const {
  const auto inner = inner_.snapshot();
  nlohmann::json j = {{"inner", inner.payload}, {"seen", std::vector<std::uint8_t>(seen_.begin(), seen_.end())}};
  return {"wiping-memorizer", 1, j.dump()};
}

void WipingMemorizer::restore(const gradual::AgentSnapshot& s) {
  const auto j = nlohmann::json::parse(s.payload);
  inner_.restore({"memorizer", 1, j.at("inner").get<std::string>()});
  const auto seen = j.at("seen").get<std::vector<std::uint8_t>>();
  seen_ = std::set<std::uint8_t>(seen.begin(), seen.end());
}

SabotagedOracle::SabotagedOracle(const gradual::InstanceTap& tap, std::size_t instance, std::uint64_t wrong_steps)
    : tap_(&tap), oracle_(tap), instance_(instance), wrong_left_(wrong_steps) {}

gradual::Symbol SabotagedOracle::step(gradual::Reward, gradual::Symbol) {
  if (tap_->instances_started == instance_ + 1 && wrong_left_ > 0) {
    --wrong_left_;
    return oracle_.worst_action();
  }
  return oracle_.best_action();
}

NoisyOracle::NoisyOracle(const gradual::InstanceTap& tap, std::uint64_t seed, double p)
    : oracle_(tap), rng_(seed), p_(p) {}

gradual::Symbol NoisyOracle::step(gradual::Reward, gradual::Symbol) {
  const double u = rng_.uniform();
  const auto pick = static_cast<std::uint8_t>(0x20 + rng_.below(0x5F));
  return u < p_ ? gradual::Symbol(pick) : oracle_.best_action();
}

}  // namespace fixtures

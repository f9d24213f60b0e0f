#include "gradual/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gradual/errors.hpp"

namespace gradual {
namespace {

template <typename T>
double row_sum(const std::vector<Weighted<T>>& row) {
  double s = 0.0;
  for (const auto& w : row) s += w.p;
  return s;
}

template <typename T>
const T& draw(std::span<const Weighted<T>> row, double u) {
  double acc = 0.0;
  for (const auto& w : row) {
    acc += w.p;
    if (u < acc) return w.value;
  }
  // Rounding left a sliver above the cumulative sum: take the last
  // positive entry.
  for (auto it = row.rbegin(); it != row.rend(); ++it)
    if (it->p > 0.0) return it->value;
  return row.back().value;
}

}  // namespace

std::size_t InstanceSpec::action_class(std::optional<Symbol> action) const {
  if (!action) return priming_class();
  auto it = std::lower_bound(distinguished_.begin(), distinguished_.end(), *action);
  if (it != distinguished_.end() && *it == *action)
    return static_cast<std::size_t>(it - distinguished_.begin());
  return other_class();
}

Symbol InstanceSpec::class_representative(std::size_t cls) const {
  if (cls < distinguished_.size()) return distinguished_[cls];
  return other_;
}

std::span<const Weighted<StateId>> InstanceSpec::transition(StateId s, std::size_t cls) const {
  return transitions_.at(cell(s, cls));
}

std::span<const Weighted<Symbol>> InstanceSpec::observation(StateId next, std::size_t cls) const {
  return observations_.at(cell(next, cls));
}

Reward InstanceSpec::reward(StateId s, std::size_t cls) const { return rewards_.at(cell(s, cls)); }

std::vector<Symbol> InstanceSpec::observation_alphabet() const {
  std::set<Symbol> seen;
  for (const auto& row : observations_)
    for (const auto& w : row)
      if (w.p > 0.0) seen.insert(w.value);
  return {seen.begin(), seen.end()};
}

InstanceBuilder::InstanceBuilder(std::vector<Symbol> distinguished_actions) {
  std::sort(distinguished_actions.begin(), distinguished_actions.end());
  distinguished_actions.erase(
      std::unique(distinguished_actions.begin(), distinguished_actions.end()),
      distinguished_actions.end());
  if (distinguished_actions.size() >= 256)
    throw ValidationError("at least one action byte must fall in the 'other' class");
  spec_.distinguished_ = std::move(distinguished_actions);
  for (int b = 0; b < 256; ++b) {
    const Symbol candidate(static_cast<std::uint8_t>(b));
    if (!std::binary_search(spec_.distinguished_.begin(), spec_.distinguished_.end(), candidate)) {
      spec_.other_ = candidate;
      break;
    }
  }
  add_state("start");
}

void InstanceBuilder::grow() {
  const std::size_t cells = spec_.state_names_.size() * spec_.class_count();
  spec_.transitions_.resize(cells);
  spec_.observations_.resize(cells);
  spec_.rewards_.resize(cells, Reward::none);
  row_set_.resize(cells, false);
}

StateId InstanceBuilder::add_state(std::string name) {
  spec_.state_names_.push_back(std::move(name));
  grow();
  return static_cast<StateId>(spec_.state_names_.size() - 1);
}

std::size_t InstanceBuilder::class_of(Symbol action) const { return spec_.action_class(action); }

InstanceBuilder& InstanceBuilder::priming(std::vector<Weighted<StateId>> successors) {
  const auto c = spec_.cell(InstanceSpec::kStart, spec_.priming_class());
  spec_.transitions_[c] = std::move(successors);
  row_set_[c] = true;
  return *this;
}

InstanceBuilder& InstanceBuilder::on_any(StateId s, Reward reward,
                                         std::vector<Weighted<StateId>> successors) {
  for (std::size_t cls = 0; cls <= spec_.other_class(); ++cls) on(s, cls, reward, successors);
  return *this;
}

InstanceBuilder& InstanceBuilder::on(StateId s, std::size_t cls, Reward reward,
                                     std::vector<Weighted<StateId>> successors) {
  if (s == InstanceSpec::kStart) throw ValidationError("start state only has a priming row");
  if (cls >= spec_.priming_class()) throw ValidationError("priming rows are set via priming()");
  const auto c = spec_.cell(s, cls);
  spec_.transitions_.at(c) = std::move(successors);
  spec_.rewards_[c] = reward;
  row_set_[c] = true;
  return *this;
}

InstanceBuilder& InstanceBuilder::emits(StateId s, std::vector<Weighted<Symbol>> observations) {
  for (std::size_t cls = 0; cls < spec_.class_count(); ++cls) emits_on(s, cls, observations);
  return *this;
}

InstanceBuilder& InstanceBuilder::emits(StateId s, Symbol observation) {
  return emits(s, std::vector<Weighted<Symbol>>{{observation, 1.0}});
}

InstanceBuilder& InstanceBuilder::emits_on(StateId s, std::size_t cls,
                                           std::vector<Weighted<Symbol>> observations) {
  spec_.observations_.at(spec_.cell(s, cls)) = std::move(observations);
  return *this;
}

InstanceBuilder& InstanceBuilder::discount(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("discount must lie in [0, 1]");
  spec_.discount_ = gamma;
  return *this;
}

InstanceBuilder& InstanceBuilder::description_length(std::size_t d) {
  spec_.description_length_ = d;
  return *this;
}

InstanceBuilder& InstanceBuilder::label(std::string text) {
  spec_.label_ = std::move(text);
  return *this;
}

InstanceSpec InstanceBuilder::build() && {
  const auto& sp = spec_;
  const std::size_t n = sp.state_count();
  auto check_row = [&](const auto& row, const std::string& what) {
    if (row.empty()) throw ValidationError("missing row: " + what);
    for (const auto& w : row)
      if (!(w.p >= 0.0 && w.p <= 1.0)) throw ValidationError("probability out of range: " + what);
    if (std::abs(row_sum(row) - 1.0) > kRowTolerance)
      throw ValidationError("row does not sum to 1: " + what);
  };
  auto where = [&](StateId s, std::size_t cls) {
    return "state '" + sp.state_names_[s] + "' class " + std::to_string(cls);
  };

  std::vector<bool> reached(n, false);
  std::vector<StateId> frontier;
  auto visit = [&](StateId from, std::size_t cls) {
    const auto& row = sp.transitions_[sp.cell(from, cls)];
    check_row(row, where(from, cls));
    for (const auto& w : row) {
      if (w.value >= n) throw ValidationError("successor out of range: " + where(from, cls));
      if (w.value == InstanceSpec::kStart)
        throw ValidationError("transition into start state: " + where(from, cls));
      if (w.p > 0.0) {
        check_row(sp.observations_[sp.cell(w.value, cls)], "observation of " + where(w.value, cls));
        if (!reached[w.value]) {
          reached[w.value] = true;
          frontier.push_back(w.value);
        }
      }
    }
  };

  reached[InstanceSpec::kStart] = true;
  visit(InstanceSpec::kStart, sp.priming_class());
  while (!frontier.empty()) {
    const StateId s = frontier.back();
    frontier.pop_back();
    for (std::size_t cls = 0; cls <= sp.other_class(); ++cls) {
      if (!row_set_[sp.cell(s, cls)]) throw ValidationError("missing row: " + where(s, cls));
      visit(s, cls);
    }
  }
  for (StateId s = 0; s < n; ++s)
    if (!reached[s]) throw ValidationError("unreachable state '" + sp.state_names_[s] + "'");
  return std::move(spec_);
}

InstanceState::InstanceState(std::shared_ptr<const InstanceSpec> spec, std::uint64_t seed,
                             std::uint64_t soft_limit, std::uint64_t hard_limit)
    : spec_(std::move(spec)),
      rng_(seed),
      seed_(seed),
      soft_limit_(soft_limit),
      hard_limit_(hard_limit) {
  if (!spec_) throw ValidationError("instance without spec");
  if (soft_limit_ == 0 || soft_limit_ > hard_limit_)
    throw ValidationError("limits must satisfy 0 < soft <= hard");
}

EnvStep env_step(InstanceState& state, std::optional<Symbol> action) {
  const InstanceSpec& spec = *state.spec_;
  if (!action) {
    if (state.primed_) throw ValidationError("instance already primed");
  } else {
    if (!state.primed_) throw ValidationError("instance must be primed before acting");
    if (state.elapsed_ >= state.hard_limit_)
      throw StepAfterTermination("instance reached its hard limit of " +
                                 std::to_string(state.hard_limit_) + " steps");
  }

  const double u_next = state.rng_.uniform();
  const double u_obs = state.rng_.uniform();
  const std::size_t cls = spec.action_class(action);
  const Reward reward = action ? spec.reward(state.current_, cls) : Reward::none;
  const StateId next = draw(spec.transition(state.current_, cls), u_next);
  const Symbol obs = draw(spec.observation(next, cls), u_obs);

  state.current_ = next;
  if (action) {
    ++state.elapsed_;
  } else {
    state.primed_ = true;
  }
  return {reward, obs};
}

std::uint64_t soft_limit(const InstanceState& instance) { return instance.soft_limit(); }
std::uint64_t hard_limit(const InstanceState& instance) { return instance.hard_limit(); }

}  // namespace gradual

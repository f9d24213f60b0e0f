#pragma once

// A task instance is one finite POMDP (S, A, Omega, P, O, r, gamma, T).
// Actions are grouped into classes: every byte the instance distinguishes
// gets its own class, all remaining bytes share the "other" class, and the
// priming step (no action) has a class of its own.  Tables are indexed by
// class, which keeps them small while still defining behaviour for all 256
// action bytes.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradual/random.hpp"
#include "gradual/stream.hpp"

namespace gradual {

using StateId = std::uint32_t;

template <typename T>
struct Weighted {
  T value;
  double p = 0.0;

  friend bool operator==(const Weighted&, const Weighted&) = default;
};

inline constexpr double kRowTolerance = 1e-12;

class InstanceSpec {
 public:
  static constexpr StateId kStart = 0;

  std::size_t state_count() const { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }

  // Bytes with a class of their own, sorted ascending.
  const std::vector<Symbol>& distinguished_actions() const { return distinguished_; }
  std::size_t class_count() const { return distinguished_.size() + 2; }
  std::size_t other_class() const { return distinguished_.size(); }
  std::size_t priming_class() const { return distinguished_.size() + 1; }
  std::size_t action_class(std::optional<Symbol> action) const;
  // A concrete byte belonging to the "other" class.
  Symbol other_action() const { return other_; }
  Symbol class_representative(std::size_t cls) const;

  std::span<const Weighted<StateId>> transition(StateId s, std::size_t cls) const;
  std::span<const Weighted<Symbol>> observation(StateId next, std::size_t cls) const;
  Reward reward(StateId s, std::size_t cls) const;

  // Omega: every byte any observation row can emit.
  std::vector<Symbol> observation_alphabet() const;

  double discount() const { return discount_; }
  std::size_t description_length() const { return description_length_; }
  const std::string& label() const { return label_; }

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;

 private:
  friend class InstanceBuilder;

  std::size_t cell(StateId s, std::size_t cls) const { return s * class_count() + cls; }

  std::vector<std::string> state_names_;
  std::vector<Symbol> distinguished_;
  Symbol other_;
  std::vector<std::vector<Weighted<StateId>>> transitions_;
  std::vector<std::vector<Weighted<Symbol>>> observations_;
  std::vector<Reward> rewards_;
  double discount_ = 1.0;
  std::size_t description_length_ = 0;
  std::string label_;
};

// Assembles and validates an InstanceSpec.  State 0 ("start") exists from
// the outset and only carries the priming row.
class InstanceBuilder {
 public:
  explicit InstanceBuilder(std::vector<Symbol> distinguished_actions);

  StateId add_state(std::string name);
  std::size_t class_of(Symbol action) const;
  std::size_t other_class() const { return spec_.other_class(); }
  std::size_t class_count() const { return spec_.class_count(); }

  // Distribution over the first post-priming state.
  InstanceBuilder& priming(std::vector<Weighted<StateId>> successors);
  // Same reward and successor distribution for every non-priming class.
  InstanceBuilder& on_any(StateId s, Reward reward, std::vector<Weighted<StateId>> successors);
  InstanceBuilder& on(StateId s, std::size_t cls, Reward reward,
                      std::vector<Weighted<StateId>> successors);
  // Observation emitted on entering `s`, independent of the action.
  InstanceBuilder& emits(StateId s, std::vector<Weighted<Symbol>> observations);
  InstanceBuilder& emits(StateId s, Symbol observation);
  InstanceBuilder& emits_on(StateId s, std::size_t cls, std::vector<Weighted<Symbol>> observations);

  InstanceBuilder& discount(double gamma);
  InstanceBuilder& description_length(std::size_t d);
  InstanceBuilder& label(std::string text);

  // Throws ValidationError on unnormalized rows, missing rows, unreachable
  // states or transitions back into the start state.
  InstanceSpec build() &&;

 private:
  void grow();

  InstanceSpec spec_;
  std::vector<bool> row_set_;
};

class InstanceState;

// Lets test fixtures (the oracle agent) look at the live instance.  Never
// handed to agents through the byte interface.
struct InstanceTap {
  const InstanceState* current = nullptr;
  std::size_t instances_started = 0;
};

struct EnvStep {
  Reward reward = Reward::none;
  Symbol observation;
};

class InstanceState {
 public:
  InstanceState(std::shared_ptr<const InstanceSpec> spec, std::uint64_t seed,
                std::uint64_t soft_limit, std::uint64_t hard_limit);

  const InstanceSpec& spec() const { return *spec_; }
  std::shared_ptr<const InstanceSpec> spec_ptr() const { return spec_; }
  StateId current_state() const { return current_; }
  std::uint64_t elapsed() const { return elapsed_; }
  bool primed() const { return primed_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t soft_limit() const { return soft_limit_; }
  std::uint64_t hard_limit() const { return hard_limit_; }

 private:
  friend EnvStep env_step(InstanceState& state, std::optional<Symbol> action);

  std::shared_ptr<const InstanceSpec> spec_;
  StateId current_ = InstanceSpec::kStart;
  Rng rng_;
  std::uint64_t seed_ = 0;
  std::uint64_t elapsed_ = 0;
  bool primed_ = false;
  std::uint64_t soft_limit_ = 0;
  std::uint64_t hard_limit_ = 0;
};

// Advances the instance by one step.  With no action this is the priming
// step: reward 0, first observation, elapsed unchanged.  Every call consumes
// exactly two uniform draws so the random stream stays aligned whatever the
// agent does.  Throws StepAfterTermination once elapsed reaches the hard
// limit and ValidationError on a repeated or missing priming step.
EnvStep env_step(InstanceState& state, std::optional<Symbol> action);

std::uint64_t soft_limit(const InstanceState& instance);
std::uint64_t hard_limit(const InstanceState& instance);

}  // namespace gradual

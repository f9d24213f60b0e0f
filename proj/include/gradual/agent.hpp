#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gradual/instance.hpp"
#include "gradual/random.hpp"
#include "gradual/stream.hpp"

namespace gradual {

struct AgentSnapshot {
  std::string kind;
  int version = 0;
  std::string payload;  // opaque to everyone but the agent that wrote it

  friend bool operator==(const AgentSnapshot&, const AgentSnapshot&) = default;
};

// An agent sees one unbroken stream of (reward, observation) pairs and
// answers each with exactly one action byte.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual Symbol step(Reward reward, Symbol observation) = 0;

  virtual AgentSnapshot snapshot() const = 0;
  // Throws ValidationError if the snapshot belongs to another agent kind or
  // version.
  virtual void restore(const AgentSnapshot& snapshot) = 0;

  virtual std::string name() const = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

// Printable ASCII, 0x20..0x7E.
std::vector<Symbol> printable_alphabet();
std::vector<Symbol> symbols_of(const std::string& text);

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed, std::vector<Symbol> alphabet = printable_alphabet());

  Symbol step(Reward reward, Symbol observation) override;
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "random"; }

 private:
  std::vector<Symbol> alphabet_;
  Rng rng_;
};

class ConstantAgent final : public Agent {
 public:
  explicit ConstantAgent(Symbol action) : action_(action) {}

  Symbol step(Reward, Symbol) override { return action_; }
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "constant"; }

 private:
  Symbol action_;
};

class EchoAgent final : public Agent {
 public:
  Symbol step(Reward, Symbol observation) override { return observation; }
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "echo"; }
};

struct MemorizerOptions {
  std::size_t window = 4;
  double epsilon = 0.1;
  double epsilon_decay = 0.9;  // applied on every positive reward
};

// Tabular learner over the last `window` observations.  Every suffix of the
// window (length window down to 1) is a context; a positive reward records
// the action as good for all suffixes, a negative one marks it bad.  Action
// choice backs off from the longest suffix with a known good action; with
// probability epsilon, or when no suffix knows a good action, it explores
// uniformly among actions not marked bad for the longest known context.
class MemorizerAgent final : public Agent {
 public:
  explicit MemorizerAgent(std::uint64_t seed, std::vector<Symbol> alphabet = printable_alphabet(),
                          MemorizerOptions options = {});

  Symbol step(Reward reward, Symbol observation) override;
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "memorizer"; }

  double epsilon() const { return epsilon_; }
  std::size_t table_size() const { return table_.size(); }
  // Good action recorded for an exact context, oldest observation first.
  std::optional<Symbol> known_action(const std::string& context) const;
  void forget();

 private:
  struct Entry {
    std::optional<std::uint8_t> good;
    std::set<std::uint8_t> bad;
  };

  std::vector<std::string> suffixes() const;

  std::vector<Symbol> alphabet_;
  MemorizerOptions options_;
  Rng rng_;
  double epsilon_;
  std::deque<std::uint8_t> window_;
  std::map<std::string, Entry> table_;
  std::vector<std::string> last_contexts_;
  std::optional<std::uint8_t> last_action_;
};

// Scripted optimal policy: peeks at the live instance through a tap and
// picks an action with the highest immediate reward.  Only meaningful
// inside harness tests.
class OracleAgent final : public Agent {
 public:
  explicit OracleAgent(const InstanceTap& tap) : tap_(&tap) {}

  Symbol step(Reward reward, Symbol observation) override;
  AgentSnapshot snapshot() const override;
  void restore(const AgentSnapshot& snapshot) override;
  std::string name() const override { return "oracle"; }

  // Best and worst actions for the tapped instance's current state.
  Symbol best_action() const;
  Symbol worst_action() const;

 private:
  const InstanceTap* tap_;
};

}  // namespace gradual

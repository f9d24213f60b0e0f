#pragma once

// Fixture machines, fixture agents and brute-force oracles shared by the
// unit and acceptance tests.  Nothing here calls into the code under test
// for the values it checks against.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "gradual/agent.hpp"
#include "gradual/machine.hpp"

namespace fixtures {

using gradual::MachineData;

// Golden Mean: A emits 0 -> A or 1 -> B with probability 1/2; B emits 0 -> A.
MachineData golden_mean();
MachineData biased_coin(double p_one);
MachineData period_two();
// Golden Mean with state A split into two identical copies that alternate
// on the 0 self-loop.
MachineData golden_mean_duplicated();
// Six states over inputs {u, v} and outputs {0, 1} that fall into two
// equivalence classes {0, 2, 4} and {1, 3, 5}.
MachineData six_state_two_classes();
// Unit-delay channel: the state is the last input and is emitted on the
// next step.
MachineData delay_channel();

// Random unifilar machine.  Every (state, input) row gets 1..outputs
// distinct outputs with random successors; state i always has an edge to
// i+1 (mod n) on every input, so the chain is irreducible under any input
// distribution with full support.
MachineData random_unifilar(std::uint64_t seed, std::size_t states, std::size_t inputs, std::size_t outputs);
// A random machine with `planted` extra states that duplicate existing ones
// and take over some of their incoming edges.
MachineData with_planted_duplicates(MachineData base, std::uint64_t seed, std::size_t planted);

// Minimization corpus: every fixture above and a batch of random machines
// with planted duplicates, all with at most 8 states.
std::vector<MachineData> minimization_corpus();

// P(output word | input word, start state) for every pair of words of the
// given length, computed by explicit path enumeration.
using Word = std::vector<std::size_t>;
std::map<std::pair<Word, Word>, double> word_distribution(const MachineData& m, std::size_t start,
                                                          std::size_t length);
// True if the two starts agree within tol on every word pair of length
// 1..depth.
bool depth_equivalent(const MachineData& a, std::size_t sa, const MachineData& b, std::size_t sb,
                      std::size_t depth, double tol);

// Straight-line reading of the solve loop over a reward script whose last
// entry repeats.  Returns the number of counted steps.
std::uint64_t solve_reference(const std::vector<int>& script, int r_star, std::uint64_t hard);

// Straight-line reading of the curriculum loop.  steps(j, i) gives the
// counted steps and whether instance i of task j was solved.
std::uint64_t curriculum_reference(std::size_t tasks, int n_s, const std::vector<std::uint64_t>& soft,
                                   const std::function<std::pair<std::uint64_t, bool>(std::size_t, std::size_t)>& steps);

// Largest number of common labelled edges over all injective partial maps,
// by exhaustive enumeration.  Only for tiny machines.
std::size_t brute_force_common_edges(const gradual::Machine& a, const gradual::Machine& b);

// Memorizer that forgets everything whenever it sees an observation byte it
// has never seen before.
class WipingMemorizer final : public gradual::Agent {
 public:
  WipingMemorizer(std::uint64_t seed, std::vector<gradual::Symbol> alphabet);
  gradual::Symbol step(gradual::Reward reward, gradual::Symbol observation) override;
  gradual::AgentSnapshot snapshot() const override;
  void restore(const gradual::AgentSnapshot& snapshot) override;
  std::string name() const override { return "wiping-memorizer"; }

 private:
  gradual::MemorizerAgent inner_;
  std::set<std::uint8_t> seen_;
};

// Oracle that, on one chosen instance, answers with the worst action for a
// fixed number of steps before behaving again.
class SabotagedOracle final : public gradual::Agent {
 public:
  SabotagedOracle(const gradual::InstanceTap& tap, std::size_t instance, std::uint64_t wrong_steps);
  gradual::Symbol step(gradual::Reward reward, gradual::Symbol observation) override;
  gradual::AgentSnapshot snapshot() const override { return {"sabotaged-oracle", 1, "{}"}; }
  void restore(const gradual::AgentSnapshot&) override {}
  std::string name() const override { return "sabotaged-oracle"; }

 private:
  const gradual::InstanceTap* tap_;
  gradual::OracleAgent oracle_;
  std::size_t instance_;
  std::uint64_t wrong_left_;
};

// Oracle that acts at random with probability p.
class NoisyOracle final : public gradual::Agent {
 public:
  NoisyOracle(const gradual::InstanceTap& tap, std::uint64_t seed, double p);
  gradual::Symbol step(gradual::Reward reward, gradual::Symbol observation) override;
  gradual::AgentSnapshot snapshot() const override { return {"noisy-oracle", 1, "{}"}; }
  void restore(const gradual::AgentSnapshot&) override {}
  std::string name() const override { return "noisy-oracle"; }

 private:
  gradual::OracleAgent oracle_;
  gradual::Rng rng_;
  double p_;
};

}  // namespace fixtures

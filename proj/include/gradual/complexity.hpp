#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gradual/machine.hpp"

namespace gradual {

// -sum p log2 p with 0 log 0 = 0.  Throws InvalidDistribution if any p < 0
// or the sum is off by more than 1e-9.
double shannon_entropy(std::span<const double> dist);

struct StateDistribution {
  std::vector<double> weights;
};

// Stationary distribution of a Markov chain given as (from, to, p) triples.
// Transient states get weight 0.  Throws NonErgodic when the chain has more
// than one closed class.
struct ChainEntry {
  std::size_t from;
  std::size_t to;
  double p;
};
StateDistribution stationary_of_chain(std::size_t n, const std::vector<ChainEntry>& entries);

StateDistribution stationary_distribution(const EpsilonMachine& machine);

// Largest |pi M - pi| over states.
double stationary_residual(const EpsilonMachine& machine, const StateDistribution& pi);

double statistical_complexity(const EpsilonMachine& machine);

// Drives a transducer: either i.i.d. over its input alphabet or a process
// whose output labels name transducer inputs.
class InputProcess {
 public:
  static InputProcess iid(std::vector<double> weights);
  static InputProcess uniform(std::size_t input_count);
  static InputProcess machine(EpsilonMachine process);

  bool is_iid() const { return std::holds_alternative<std::vector<double>>(source_); }
  const std::vector<double>& weights() const { return std::get<std::vector<double>>(source_); }
  const EpsilonMachine& process() const { return std::get<EpsilonMachine>(source_); }

 private:
  explicit InputProcess(std::variant<std::vector<double>, EpsilonMachine> s) : source_(std::move(s)) {}
  std::variant<std::vector<double>, EpsilonMachine> source_;
};

// Stationary distribution over transducer states when driven by `input`.
StateDistribution driven_state_distribution(const EpsilonTransducer& transducer,
                                            const InputProcess& input);

double input_dependent_complexity(const EpsilonTransducer& transducer, const InputProcess& input);

struct ChannelSearchOptions {
  double resolution = 1e-2;
  double refine_to = 1e-4;
  // The grid is coarsened until it has at most this many points.
  std::size_t max_grid_points = 400;
  std::size_t max_refine_rounds = 200;
};

struct ChannelEstimate {
  double value = 0.0;
  std::vector<double> maximizing_input;
  double topological_bound = 0.0;
  double resolution_used = 0.0;
  std::size_t evaluations = 0;
  // Only i.i.d. inputs are searched, so the value bounds the channel
  // complexity from below.
  bool lower_bound = true;
};

ChannelEstimate channel_complexity_upper(const EpsilonTransducer& transducer,
                                         const ChannelSearchOptions& options = {});

// log2 of the state count.
double topological_complexity(const Machine& machine);

}  // namespace gradual

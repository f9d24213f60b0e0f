#pragma once

// Finite stochastic machines with labelled transitions.
//
// Every machine is stored as a transducer: a transition (i, x, y, j, p)
// means P(S1 = j, Y0 = y | S0 = i, X0 = x) = p.  A plain process (an
// epsilon-machine) has exactly one input, conventionally labelled "".
//
// Three wrappers share the representation:
//   RawMachine          any row-normalized machine (minimization input)
//   EpsilonMachine      single input
//   EpsilonTransducer   any input alphabet
// Construction checks indices and normalization only; unifilarity is a
// property producers guarantee and is_unifilar checks.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace gradual {

inline constexpr double kNormTolerance = 1e-12;

enum class TransitionKind : std::uint8_t { regular, error, instance_switch };

struct Transition {
  std::size_t from = 0;
  std::size_t input = 0;
  std::size_t output = 0;
  std::size_t to = 0;
  double p = 0.0;
  TransitionKind kind = TransitionKind::regular;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct MachineData {
  std::vector<std::string> inputs{""};
  std::vector<std::string> outputs;
  std::vector<std::string> states;
  std::vector<Transition> transitions;

  friend bool operator==(const MachineData&, const MachineData&) = default;
};

class Machine {
 public:
  const MachineData& data() const { return *data_; }
  std::size_t state_count() const { return data_->states.size(); }
  std::size_t input_count() const { return data_->inputs.size(); }
  std::size_t output_count() const { return data_->outputs.size(); }
  const std::vector<std::string>& inputs() const { return data_->inputs; }
  const std::vector<std::string>& outputs() const { return data_->outputs; }
  const std::vector<std::string>& states() const { return data_->states; }

  // Sorted by (from, input, output, to).
  const std::vector<Transition>& transitions() const { return data_->transitions; }
  std::span<const Transition> outgoing(std::size_t state) const;
  std::span<const Transition> outgoing(std::size_t state, std::size_t input) const;

  // Successor for (state, input, output) in a unifilar machine; npos if the
  // output has probability zero.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t successor(std::size_t state, std::size_t input, std::size_t output) const;

  friend bool operator==(const Machine& a, const Machine& b) { return a.data() == b.data(); }

 protected:
  // Sorts transitions, merges duplicates, drops zero-probability entries and
  // throws ValidationError on bad indices, negative probabilities or rows
  // that do not sum to one.
  Machine(MachineData data, const char* kind);

 private:
  std::shared_ptr<const MachineData> data_;
  std::vector<std::size_t> row_start_;  // per (state, input)
};

class RawMachine : public Machine {
 public:
  explicit RawMachine(MachineData data) : Machine(std::move(data), "raw machine") {}
};

class EpsilonMachine : public Machine {
 public:
  explicit EpsilonMachine(MachineData data);
};

class EpsilonTransducer : public Machine {
 public:
  explicit EpsilonTransducer(MachineData data) : Machine(std::move(data), "transducer") {}
};

bool is_unifilar(const Machine& machine);

// Structured text form: alphabets, state names and sparse transition tuples
// (i, y, j, p) for machines or (i, y, x, j, p) for transducers.
nlohmann::json to_json(const Machine& machine);
std::string serialize(const Machine& machine);
// `kind` of the document decides the wrapper; use the typed readers when
// the caller needs a specific one.
MachineData machine_data_from_json(const nlohmann::json& doc);
EpsilonMachine read_epsilon_machine(const std::string& text);
EpsilonTransducer read_transducer(const std::string& text);
RawMachine read_raw_machine(const std::string& text);

struct Simulation {
  std::vector<std::size_t> outputs;
  std::vector<std::size_t> states;  // state before each output
};

// Runs a process for n steps from `start`.
Simulation simulate(const EpsilonMachine& machine, std::size_t n, std::uint64_t seed,
                    std::size_t start = 0);

}  // namespace gradual

#pragma once

// Builds the epsilon-transducer of a task: input = agent action, output =
// (observation, reward) pair, labelled "o,r" (e.g. "a,+1").
//
// Tasks are distributions over instances, approximated by a finite list of
// sampled seeds.  The agent cannot see which instance it is in, so the
// model state is the agent-side belief over (instance, instance state)
// together with the count of consecutive positive rewards.  Reaching R*
// ends the instance: the completing step emits the next instance's priming
// observation with reward +1 (the final observation of an instance is never
// delivered) and moves to the post-priming belief.  These edges are marked
// as instance switches.  The hard step limit is not modelled.
//
// Inputs are every byte some sampled instance distinguishes, plus "*" for
// all remaining bytes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gradual/machine.hpp"
#include "gradual/task.hpp"

namespace gradual {

inline constexpr std::size_t kDefaultStateCap = 100000;
inline constexpr const char* kOtherInputLabel = "*";

struct TaskModelOptions {
  // Explicit instance seeds; when empty, `instances` seeds are derived from
  // `seed`.
  std::vector<std::uint64_t> seeds;
  std::size_t instances = 2;
  std::uint64_t seed = 1;
  std::size_t state_cap = kDefaultStateCap;
  std::optional<int> req_reward;  // defaults to the task's own
};

std::vector<std::uint64_t> model_seeds(const TaskModelOptions& options);

// Label helpers shared with exporters.
std::string output_label(Symbol observation, Reward reward);

// Throws StateExplosion if more than state_cap beliefs are reachable.
RawMachine task_raw_machine(const TaskSpec& task, const TaskModelOptions& options = {});

EpsilonTransducer transducer_from_task(const TaskSpec& task, const TaskModelOptions& options = {});

}  // namespace gradual

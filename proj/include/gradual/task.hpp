#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gradual/instance.hpp"

namespace gradual {

// soft = description_length + per_reward * R*, hard = hard_factor * soft.
struct LimitPolicy {
  std::uint64_t per_reward = 8;
  std::uint64_t hard_factor = 4;

  std::uint64_t soft(const InstanceSpec& spec, int req_reward) const;
  std::uint64_t hard(const InstanceSpec& spec, int req_reward) const;

  friend bool operator==(const LimitPolicy&, const LimitPolicy&) = default;
};

using InstanceSampler = std::function<InstanceSpec(std::uint64_t seed)>;

// A task is a distribution over instances: a seeded sampler plus the
// success criterion shared by all of its instances.
struct TaskSpec {
  std::string id;
  InstanceSampler sampler;
  int req_reward = 5;
  LimitPolicy limits;
  // Parameters the task was built from, kept for reports and config output.
  std::string params_json = "{}";
};

struct CurriculumSpec {
  std::vector<TaskSpec> tasks;
  int n_s = 2;
  std::uint64_t seed = 1;
};

// Throws ValidationError on an empty task list, n_s < 1, R_j < 1 or zero
// limit constants.
void validate(const CurriculumSpec& curriculum);
void validate(const TaskSpec& task);

InstanceState sample_instance(const TaskSpec& task, std::uint64_t seed);

int req_reward(const TaskSpec& task);

// Seed of the attempt-th instance of the task at position task_index.
std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t attempt);

}  // namespace gradual

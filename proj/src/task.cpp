#include "gradual/task.hpp"

#include "gradual/errors.hpp"
#include "gradual/random.hpp"

namespace gradual {

std::uint64_t LimitPolicy::soft(const InstanceSpec& spec, int req_reward) const {
  return spec.description_length() + per_reward * static_cast<std::uint64_t>(req_reward);
}

std::uint64_t LimitPolicy::hard(const InstanceSpec& spec, int req_reward) const {
  return hard_factor * soft(spec, req_reward);
}

void validate(const TaskSpec& task) {
  if (task.id.empty()) throw ValidationError("task without id");
  if (!task.sampler) throw ValidationError("task '" + task.id + "' has no sampler");
  if (task.req_reward < 1) throw ValidationError("task '" + task.id + "': req_reward must be >= 1");
  if (task.limits.per_reward < 1 || task.limits.hard_factor < 1)
    throw ValidationError("task '" + task.id + "': limit constants must be >= 1");
}

void validate(const CurriculumSpec& curriculum) {
  if (curriculum.tasks.empty()) throw ValidationError("curriculum has no tasks");
  if (curriculum.n_s < 1) throw ValidationError("n_s must be >= 1");
  for (const auto& t : curriculum.tasks) validate(t);
}

InstanceState sample_instance(const TaskSpec& task, std::uint64_t seed) {
  auto spec = std::make_shared<const InstanceSpec>(task.sampler(seed));
  const auto soft = task.limits.soft(*spec, task.req_reward);
  const auto hard = task.limits.hard(*spec, task.req_reward);
  // The instance stream is decorrelated from the sampler stream that built
  // the spec.
  return InstanceState(std::move(spec), mix_seed(seed, 0x5EED), soft, hard);
}

int req_reward(const TaskSpec& task) { return task.req_reward; }

std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t task_index, std::size_t attempt) {
  return mix_seed(mix_seed(master_seed, task_index), attempt);
}

}  // namespace gradual

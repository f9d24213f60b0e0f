#pragma once

// Bundled micro/mini tasks.  Each is a reconstruction of a task family from
// the public curriculum, built as a seeded distribution over small POMDPs:
//
//   micro_fixed             hidden target byte; any prompt; emit the target
//   micro_echo              repeat the last observation byte
//   micro_map_A21           one prompt letter, one correct response letter
//   micro_map_A21_adaptive  as above, but the correct letter drifts after a
//                           number of correct answers
//   micro_group_A22         letters split into two groups; the response
//                           depends on the group of the prompt letter
//   mini_describe_A291      a spelled-out mapping, then queries against it
//   mini_membership         a string, a '?', then accept ('y') or reject ('n')
//
// Observations are printable ASCII.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gradual/task.hpp"

namespace gradual {

std::vector<std::string> bundled_task_ids();

// Throws ConfigError for unknown ids or parameters.  Recognised top-level
// keys besides task parameters are handled by the config loader.
TaskSpec make_task(std::string_view id, const nlohmann::json& params = nlohmann::json::object());

// Instance whose reward sequence follows `script` regardless of the action;
// the final entry repeats forever.  Used to drive the harness with exact
// reward traces.
TaskSpec scripted_reward_task(std::vector<Reward> script, int req_reward,
                              LimitPolicy limits = {}, Symbol prompt = Symbol('.'));

// The representative curriculum shipped with the engine, in increasing
// statistical complexity.
CurriculumSpec bundled_curriculum(std::uint64_t seed = 1, int n_s = 2);

}  // namespace gradual

#pragma once

// Curriculum files:
//
//   {
//     "version": 1,
//     "seed": 1,
//     "n_s": 2,
//     "tasks": [
//       {"id": "micro_fixed", "req_reward": 5,
//        "limits": {"per_reward": 8, "hard_factor": 4},
//        "params": {"prompt": ">"}}
//     ],
//     "budget": {"steps": 100000, "seconds": 60}
//   }
//
// Everything but "version" and "tasks" is optional.  Unknown keys are
// rejected.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "gradual/task.hpp"

namespace gradual {

struct RunConfig {
  CurriculumSpec curriculum;
  std::optional<std::uint64_t> budget_steps;
  std::optional<double> budget_seconds;
};

// Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace gradual

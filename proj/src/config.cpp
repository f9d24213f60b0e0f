#include "gradual/config.hpp"

#include <fstream>
#include <set>
#include <type_traits>

#include "gradual/errors.hpp"
#include "gradual/task_library.hpp"

namespace gradual {
namespace {

using json = nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  try {
    const json& v = obj.at(key);
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw ConfigError(where + ": '" + key + "' must be a non-negative integer");
    }
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": '" + key + "' is missing or has the wrong type");
  }
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  only_keys(doc, {"version", "seed", "n_s", "tasks", "budget"}, "curriculum file");
  if (field<int>(doc, "version", "curriculum file") != 1)
    throw ConfigError("curriculum file: unsupported version");
  RunConfig cfg;
  if (doc.contains("seed")) cfg.curriculum.seed = field<std::uint64_t>(doc, "seed", "curriculum file");
  if (doc.contains("n_s")) cfg.curriculum.n_s = field<int>(doc, "n_s", "curriculum file");
  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw ConfigError("curriculum file: 'tasks' must be an array");
  std::size_t i = 0;
  for (const auto& entry : doc["tasks"]) {
    const std::string where = "tasks[" + std::to_string(i++) + "]";
    only_keys(entry, {"id", "req_reward", "limits", "params"}, where);
    const auto id = field<std::string>(entry, "id", where);
    TaskSpec task = make_task(id, entry.contains("params") ? entry["params"] : json::object());
    if (entry.contains("req_reward")) task.req_reward = field<int>(entry, "req_reward", where);
    if (entry.contains("limits")) {
      const auto& lim = entry["limits"];
      only_keys(lim, {"per_reward", "hard_factor"}, where + ".limits");
      if (lim.contains("per_reward")) task.limits.per_reward = field<std::uint64_t>(lim, "per_reward", where);
      if (lim.contains("hard_factor")) task.limits.hard_factor = field<std::uint64_t>(lim, "hard_factor", where);
    }
    cfg.curriculum.tasks.push_back(std::move(task));
  }
  if (doc.contains("budget")) {
    const auto& b = doc["budget"];
    only_keys(b, {"steps", "seconds"}, "budget");
    if (b.contains("steps")) cfg.budget_steps = field<std::uint64_t>(b, "steps", "budget");
    if (b.contains("seconds")) cfg.budget_seconds = field<double>(b, "seconds", "budget");
    if (cfg.budget_seconds && !(*cfg.budget_seconds > 0.0)) throw ConfigError("budget: 'seconds' must be > 0");
  }
  try {
    validate(cfg.curriculum);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("curriculum file: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curriculum file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("curriculum file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& config) {
  json tasks = json::array();
  for (const auto& t : config.curriculum.tasks) {
    json entry = {{"id", t.id},
                  {"req_reward", t.req_reward},
                  {"limits", {{"per_reward", t.limits.per_reward}, {"hard_factor", t.limits.hard_factor}}}};
    const json params = json::parse(t.params_json);
    if (!params.empty()) entry["params"] = params;
    tasks.push_back(std::move(entry));
  }
  json doc = {{"version", 1}, {"seed", config.curriculum.seed}, {"n_s", config.curriculum.n_s}, {"tasks", tasks}};
  json budget = json::object();
  if (config.budget_steps) budget["steps"] = *config.budget_steps;
  if (config.budget_seconds) budget["seconds"] = *config.budget_seconds;
  if (!budget.empty()) doc["budget"] = budget;
  return doc;
}

}  // namespace gradual

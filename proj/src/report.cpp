#include "gradual/report.hpp"

#include <cstdio>
#include <sstream>

namespace gradual {
namespace {

using json = nlohmann::json;

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

json to_json(const CurriculumResult& result, bool include_log) {
  json tasks = json::array();
  for (const auto& t : result.per_task)
    tasks.push_back({{"id", t.id},
                     {"instances_attempted", t.instances_attempted},
                     {"instances_successful", t.instances_successful},
                     {"steps", t.steps},
                     {"completed", t.completed}});
  json doc = {{"total_steps", result.total_steps}, {"completed", result.completed}, {"tasks", tasks}};
  if (include_log) {
    json records = json::array();
    for (const auto& r : result.log.records()) {
      json rec = {{"t", r.t}, {"observation", r.observation.value()}, {"reward", to_int(r.reward)}};
      if (r.action) rec["action"] = r.action->value();
      records.push_back(std::move(rec));
    }
    json bounds = json::array();
    for (const auto& b : result.log.boundaries())
      bounds.push_back({{"record", b.record},
                        {"task", b.task_id},
                        {"task_index", b.task_index},
                        {"instance", b.instance_index},
                        {"seed", b.instance_seed}});
    doc["log"] = {{"records", records}, {"boundaries", bounds}};
  }
  return doc;
}

json to_json(const TransferReport& report) {
  json doc = {{"rho_primed", report.rho_primed}, {"rho_fresh", report.rho_fresh}, {"passed", report.passed}};
  if (report.constant_c) doc["c"] = *report.constant_c;
  return doc;
}

json to_json(const ComplexityReport& report) {
  json tasks = json::array();
  for (const auto& t : report.tasks) {
    json entry = {{"id", t.id}, {"analyzed", t.analyzed}, {"seeds", t.seeds}};
    if (t.analyzed) {
      entry["states"] = t.states;
      entry["c0"] = t.c0;
      entry["c_mu"] = t.c_mu;
      if (t.channel)
        entry["channel"] = {{"estimate", t.channel->value},
                            {"lower_bound", t.channel->lower_bound},
                            {"maximizing_input", t.channel->maximizing_input},
                            {"resolution", t.channel->resolution_used},
                            {"evaluations", t.channel->evaluations}};
    } else {
      entry["error"] = t.error;
    }
    tasks.push_back(std::move(entry));
  }
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"earlier", v.earlier}, {"later", v.later}, {"earlier_c_mu", v.earlier_c_mu},
                          {"later_c_mu", v.later_c_mu}});
  return {{"tasks", tasks}, {"order_ok", report.order_ok}, {"violations", violations},
          {"unanalyzed", report.unanalyzed}};
}

json to_json(const SharedStructureScore& score) {
  json witness = json::array();
  for (const auto& [u, w] : score.witness) witness.push_back({u, w});
  return {{"pair", {score.pair.first, score.pair.second}},
          {"score", score.score},
          {"common_edges", score.common_edges},
          {"exact", score.exact},
          {"witness", witness}};
}

std::string render_text(const CurriculumResult& result) {
  std::ostringstream out;
  out << pad("task", 26) << pad("attempted", 11) << pad("successful", 12) << "steps\n";
  for (const auto& t : result.per_task)
    out << pad(t.id, 26) << pad(std::to_string(t.instances_attempted), 11)
        << pad(std::to_string(t.instances_successful), 12) << t.steps << (t.completed ? "" : "  (incomplete)")
        << "\n";
  out << "total steps: " << result.total_steps << (result.completed ? "" : " (curriculum not completed)") << "\n";
  return out.str();
}

std::string render_text(const TransferReport& report, const std::string& check) {
  std::ostringstream out;
  out << check << ": " << (report.passed ? "passed" : "failed") << "\n";
  out << "  rho primed: " << report.rho_primed << "\n";
  out << "  rho fresh:  " << report.rho_fresh << "\n";
  if (report.constant_c) out << "  c:          " << *report.constant_c << "\n";
  return out.str();
}

std::string render_text(const ComplexityReport& report) {
  std::ostringstream out;
  out << pad("task", 26) << pad("states", 8) << pad("C0", 9) << pad("Cmu", 9) << "Cbar (i.i.d. lower bound)\n";
  for (const auto& t : report.tasks) {
    if (!t.analyzed) {
      out << pad(t.id, 26) << "unanalyzed: " << t.error << "\n";
      continue;
    }
    out << pad(t.id, 26) << pad(std::to_string(t.states), 8) << pad(fixed(t.c0), 9) << pad(fixed(t.c_mu), 9)
        << (t.channel ? fixed(t.channel->value) : std::string("-")) << "\n";
  }
  out << "order: " << (report.order_ok ? "non-decreasing" : "violated") << "\n";
  for (const auto& v : report.violations)
    out << "  " << report.tasks[v.earlier].id << " (" << fixed(v.earlier_c_mu) << ") > "
        << report.tasks[v.later].id << " (" << fixed(v.later_c_mu) << ")\n";
  return out.str();
}

}  // namespace gradual

// Command-line front end.  Exit codes: 0 success, 1 a check failed or a
// runtime error, 2 invalid input or configuration, 3 budget exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gradual/analysis.hpp"
#include "gradual/config.hpp"
#include "gradual/cssr.hpp"
#include "gradual/dot.hpp"
#include "gradual/errors.hpp"
#include "gradual/external_agent.hpp"
#include "gradual/harness.hpp"
#include "gradual/minimize.hpp"
#include "gradual/report.hpp"
#include "gradual/task_library.hpp"
#include "gradual/task_model.hpp"

using namespace gradual;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

struct Global {
  std::optional<std::uint64_t> seed;
  std::string curriculum;
  std::optional<std::uint64_t> budget_steps;
  std::optional<double> budget_seconds;
  std::string format = "text";
  std::string out;
};

struct AgentChoice {
  std::string kind = "memorizer";
  std::uint64_t seed = 1;
  std::string command;
  std::string alphabet;
  char constant = 'a';
};

void add_agent_options(CLI::App* cmd, AgentChoice& a) {
  cmd->add_option("--agent", a.kind, "random | constant | echo | memorizer | external")
      ->check(CLI::IsMember({"random", "constant", "echo", "memorizer", "external"}));
  cmd->add_option("--agent-seed", a.seed, "seed of the agent's own randomness");
  cmd->add_option("--agent-cmd", a.command, "shell command for --agent external");
  cmd->add_option("--alphabet", a.alphabet, "action bytes (default printable ASCII)");
  cmd->add_option("--constant", a.constant, "action byte for --agent constant");
}

AgentFactory factory_for(const AgentChoice& a) {
  const auto alphabet = a.alphabet.empty() ? printable_alphabet() : symbols_of(a.alphabet);
  if (a.kind == "random") return [=] { return std::make_unique<RandomAgent>(a.seed, alphabet); };
  if (a.kind == "constant")
    return [=] { return std::make_unique<ConstantAgent>(Symbol(static_cast<std::uint8_t>(a.constant))); };
  if (a.kind == "echo") return [] { return std::make_unique<EchoAgent>(); };
  if (a.kind == "external") {
    if (a.command.empty()) throw ValidationError("--agent external needs --agent-cmd");
    return [=] { return std::make_unique<ExternalAgent>(a.command); };
  }
  return [=] { return std::make_unique<MemorizerAgent>(a.seed, alphabet); };
}

RunConfig curriculum_from(const Global& g) {
  RunConfig cfg;
  if (!g.curriculum.empty()) {
    cfg = load_run_config(g.curriculum);
  } else {
    cfg.curriculum = bundled_curriculum();
  }
  if (g.seed) cfg.curriculum.seed = *g.seed;
  if (g.budget_steps) cfg.budget_steps = g.budget_steps;
  if (g.budget_seconds) cfg.budget_seconds = g.budget_seconds;
  return cfg;
}

TaskSpec task_from(const std::string& id, const std::string& params) {
  json p = json::object();
  if (!params.empty()) {
    try {
      p = json::parse(params);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("--params is not valid JSON: ") + e.what());
    }
  }
  return make_task(id, p);
}

void emit(const Global& g, const std::string& text, const json& structured) {
  const std::string body = g.format == "structured" ? structured.dump(2) + "\n" : text;
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ValidationError("cannot write '" + g.out + "'");
  f << body;
}

void emit_text(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ValidationError("cannot write '" + g.out + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads one action per line from the terminal; the first byte of the line
// is the action, an empty line sends a space.
class HumanAgent final : public Agent {
 public:
  Symbol step(Reward reward, Symbol observation) override {
    std::cout << "reward " << reward_label(reward) << "  observation " << symbol_label(observation) << "\n> "
              << std::flush;
    std::string line;
    if (!std::getline(std::cin, line) || line == ":q") throw Error("player quit");
    return Symbol(static_cast<std::uint8_t>(line.empty() ? ' ' : line[0]));
  }
  AgentSnapshot snapshot() const override { return {"human", 1, "{}"}; }
  void restore(const AgentSnapshot&) override {}
  std::string name() const override { return "human"; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum evaluation engine for byte-stream learning agents"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "master seed (overrides the curriculum file)");
  app.add_option("--curriculum", g.curriculum, "curriculum file (default: bundled curriculum)");
  app.add_option("--budget-steps", g.budget_steps, "stop after this many agent steps");
  app.add_option("--budget-seconds", g.budget_seconds, "stop after this much wall-clock time");
  app.add_option("--format", g.format, "text | structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--out", g.out, "write the result to this file instead of stdout");

  AgentChoice agent;
  int n_s = 0;

  auto* run = app.add_subcommand("run", "evaluate an agent on a curriculum");
  add_agent_options(run, agent);
  bool with_log = false;
  run->add_flag("--log", with_log, "include the full step log in structured output");

  auto* gradual_cmd = app.add_subcommand("check-gradual", "primed-vs-fresh gradual learning check");
  add_agent_options(gradual_cmd, agent);
  std::vector<std::string> pretrain;
  std::string probe;
  std::uint64_t probe_seed = 2;
  gradual_cmd->add_option("--pretrain", pretrain, "pretraining task ids, in order");
  gradual_cmd->add_option("--probe", probe, "probe task id")->required();
  gradual_cmd->add_option("--probe-seed", probe_seed, "seed shared by both probe runs");
  gradual_cmd->add_option("--n-s", n_s, "consecutive successes per task");

  auto* forget_cmd = app.add_subcommand("check-forgetting", "catastrophic forgetting check");
  add_agent_options(forget_cmd, agent);
  std::vector<std::string> sequence;
  std::string revisit;
  double c = kDefaultForgettingConstant;
  forget_cmd->add_option("--sequence", sequence, "training task ids, at least two")->required();
  forget_cmd->add_option("--revisit", revisit, "task measured before and after the last one")->required();
  forget_cmd->add_option("--c", c, "allowed slowdown factor");
  forget_cmd->add_option("--probe-seed", probe_seed, "seed shared by both revisit runs");
  forget_cmd->add_option("--n-s", n_s, "consecutive successes per task");

  auto* analyze = app.add_subcommand("analyze", "complexity report for a curriculum");
  std::size_t instances = 2;
  bool no_channel = false;
  analyze->add_option("--instances", instances, "sampled instances per task model");
  analyze->add_flag("--no-channel", no_channel, "skip the channel complexity search");

  auto* model = app.add_subcommand("model", "write a task's transducer");
  std::string task_id, params;
  bool raw_only = false;
  model->add_option("--task", task_id, "task id")->required();
  model->add_option("--params", params, "task parameters as JSON");
  model->add_option("--instances", instances, "sampled instances");
  model->add_flag("--raw", raw_only, "skip minimization");

  auto* recon = app.add_subcommand("reconstruct", "reconstruct an epsilon-machine from a symbol file");
  std::string input_path, mode = "bytes";
  CssrOptions cssr;
  recon->add_option("--input", input_path, "symbol file")->required();
  recon->add_option("--mode", mode, "bytes | lines")->check(CLI::IsMember({"bytes", "lines"}));
  recon->add_option("--l-max", cssr.l_max, "longest history");
  recon->add_option("--alpha", cssr.alpha, "significance level");

  auto* exp = app.add_subcommand("export", "render a machine file as Graphviz DOT");
  std::string machine_path;
  DotOptions dot;
  bool no_probs = false;
  exp->add_option("--machine", machine_path, "machine file")->required();
  exp->add_flag("--hide-errors", dot.hide_errors, "drop reward -1 transitions");
  exp->add_flag("--hide-switches", dot.hide_switches, "drop instance switch transitions");
  exp->add_flag("--merge-descriptions", dot.merge_descriptions, "collapse description chains");
  exp->add_flag("--no-probabilities", no_probs, "omit transition probabilities");

  auto* play = app.add_subcommand("play", "play a task from the terminal");
  play->add_option("--task", task_id, "task id")->required();
  play->add_option("--params", params, "task parameters as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  RunConfig cfg;
  try {
    if (run->parsed()) {
      cfg = curriculum_from(g);
      auto a = factory_for(agent)();
      SessionOptions opts;
      opts.budget_steps = cfg.budget_steps;
      opts.budget_seconds = cfg.budget_seconds;
      const auto result = run_curriculum(*a, cfg.curriculum, opts);
      emit(g, render_text(result), to_json(result, with_log));
      return kExitOk;
    }
    if (gradual_cmd->parsed() || forget_cmd->parsed()) {
      cfg = curriculum_from(g);
      TransferOptions opts;
      opts.seed = cfg.curriculum.seed;
      opts.probe_seed = probe_seed;
      opts.n_s = n_s > 0 ? n_s : cfg.curriculum.n_s;
      opts.session.budget_steps = cfg.budget_steps;
      opts.session.budget_seconds = cfg.budget_seconds;
      const auto factory = factory_for(agent);
      TransferReport report;
      std::string name;
      if (gradual_cmd->parsed()) {
        std::vector<TaskSpec> tasks;
        for (const auto& id : pretrain) tasks.push_back(make_task(id));
        report = gradual_learning_check(factory, tasks, make_task(probe), opts);
        name = "gradual learning";
      } else {
        std::vector<TaskSpec> tasks;
        for (const auto& id : sequence) tasks.push_back(make_task(id));
        report = forgetting_check(factory, tasks, make_task(revisit), c, opts);
        name = "forgetting";
      }
      emit(g, render_text(report, name), to_json(report));
      return report.passed ? kExitOk : kExitFailed;
    }
    if (analyze->parsed()) {
      cfg = curriculum_from(g);
      AnalysisOptions opts;
      opts.model.instances = instances;
      opts.channel_estimate = !no_channel;
      const auto report = curriculum_order_check(cfg.curriculum, opts);
      emit(g, render_text(report), to_json(report));
      return kExitOk;
    }
    if (model->parsed()) {
      TaskModelOptions opts;
      opts.instances = instances;
      if (g.seed) opts.seed = *g.seed;
      const TaskSpec task = task_from(task_id, params);
      const RawMachine raw = task_raw_machine(task, opts);
      json doc = raw_only ? to_json(raw) : to_json(minimize(raw));
      doc["task"] = task.id;
      doc["seeds"] = model_seeds(opts);
      emit_text(g, doc.dump(1) + "\n");
      return kExitOk;
    }
    if (recon->parsed()) {
      std::ifstream in(input_path, std::ios::binary);
      if (!in) throw ValidationError("cannot open '" + input_path + "'");
      const SymbolSequence seq = mode == "lines" ? read_line_sequence(in) : read_binary_sequence(in);
      const auto r = reconstruct_from_sequence(seq, cssr);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      emit_text(g, serialize(r.machine));
      return kExitOk;
    }
    if (exp->parsed()) {
      dot.probabilities = !no_probs;
      const json doc = json::parse(read_file(machine_path));
      const RawMachine m(machine_data_from_json(doc));
      emit_text(g, export_dot(m, dot));
      return kExitOk;
    }
    if (play->parsed()) {
      CurriculumSpec single;
      single.tasks.push_back(task_from(task_id, params));
      if (g.seed) single.seed = *g.seed;
      HumanAgent human;
      std::cout << "type one character per step, :q to quit\n";
      try {
        const auto result = run_curriculum(human, single);
        std::cout << "task completed in " << result.total_steps << " steps\n";
      } catch (const AgentFailure&) {
        std::cout << "\nbye\n";
      }
      return kExitOk;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    emit(g, render_text(e.partial()), to_json(e.partial()));
    return kExitBudget;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}

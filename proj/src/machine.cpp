#include "gradual/machine.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gradual/errors.hpp"
#include "gradual/random.hpp"

namespace gradual {
namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

const char* kind_name(TransitionKind k) {
  switch (k) {
    case TransitionKind::error: return "error";
    case TransitionKind::instance_switch: return "switch";
    case TransitionKind::regular: break;
  }
  return "regular";
}

TransitionKind kind_from(const std::string& s) {
  if (s == "error") return TransitionKind::error;
  if (s == "switch") return TransitionKind::instance_switch;
  if (s == "regular") return TransitionKind::regular;
  throw ValidationError("unknown transition kind '" + s + "'");
}

auto order_key(const Transition& t) { return std::tie(t.from, t.input, t.output, t.to); }

}  // namespace

Machine::Machine(MachineData data, const char* kind) {
  const std::string what = kind;
  if (data.states.empty()) throw ValidationError(what + " needs at least one state");
  if (data.inputs.empty()) throw ValidationError(what + " needs at least one input symbol");
  const std::size_t n = data.states.size();
  const std::size_t nx = data.inputs.size();
  for (const auto& t : data.transitions) {
    if (t.from >= n || t.to >= n) throw ValidationError(what + ": transition state index out of range");
    if (t.input >= nx) throw ValidationError(what + ": transition input index out of range");
    if (t.output >= data.outputs.size())
      throw ValidationError(what + ": transition output index out of range");
    if (!(t.p >= 0.0) || !std::isfinite(t.p))
      throw ValidationError(what + ": transition probability must be finite and >= 0");
  }
  auto& ts = data.transitions;
  std::stable_sort(ts.begin(), ts.end(),
                   [](const Transition& a, const Transition& b) { return order_key(a) < order_key(b); });
  std::vector<Transition> merged;
  merged.reserve(ts.size());
  for (const auto& t : ts) {
    if (!merged.empty() && order_key(merged.back()) == order_key(t)) {
      merged.back().p += t.p;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Transition& t) { return t.p == 0.0; });
  ts = std::move(merged);

  row_start_.assign(n * nx + 1, 0);
  std::vector<double> sums(n * nx, 0.0);
  for (const auto& t : ts) {
    ++row_start_[t.from * nx + t.input + 1];
    sums[t.from * nx + t.input] += t.p;
  }
  for (std::size_t i = 0; i < n * nx; ++i) row_start_[i + 1] += row_start_[i];
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < nx; ++x)
      if (std::abs(sums[s * nx + x] - 1.0) > kNormTolerance)
        throw ValidationError(what + ": row of state '" + data.states[s] + "' under input '" +
                              data.inputs[x] + "' sums to " + std::to_string(sums[s * nx + x]));
  data_ = std::make_shared<const MachineData>(std::move(data));
}

std::span<const Transition> Machine::outgoing(std::size_t state) const {
  const std::size_t nx = input_count();
  const auto& ts = data_->transitions;
  return {ts.data() + row_start_[state * nx], ts.data() + row_start_[(state + 1) * nx]};
}

std::span<const Transition> Machine::outgoing(std::size_t state, std::size_t input) const {
  const std::size_t cell = state * input_count() + input;
  const auto& ts = data_->transitions;
  return {ts.data() + row_start_[cell], ts.data() + row_start_[cell + 1]};
}

std::size_t Machine::successor(std::size_t state, std::size_t input, std::size_t output) const {
  for (const auto& t : outgoing(state, input))
    if (t.output == output) return t.to;
  return npos;
}

EpsilonMachine::EpsilonMachine(MachineData data) : Machine(std::move(data), "epsilon-machine") {
  if (input_count() != 1) throw ValidationError("epsilon-machine must have exactly one input symbol");
}

bool is_unifilar(const Machine& machine) {
  const auto& ts = machine.transitions();
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (ts[i].from == ts[i - 1].from && ts[i].input == ts[i - 1].input &&
        ts[i].output == ts[i - 1].output)
      return false;
  return true;
}

json to_json(const Machine& machine) {
  const auto& d = machine.data();
  const bool process = d.inputs.size() == 1 && d.inputs[0].empty();
  json doc = {{"format", "gradual-machine"},
              {"version", kFormatVersion},
              {"kind", process ? "process" : "transducer"},
              {"outputs", d.outputs},
              {"states", d.states}};
  if (!process) doc["inputs"] = d.inputs;
  json rows = json::array();
  for (const auto& t : d.transitions) {
    json row = process ? json::array({t.from, t.output, t.to, t.p})
                       : json::array({t.from, t.output, t.input, t.to, t.p});
    if (t.kind != TransitionKind::regular) row.push_back(kind_name(t.kind));
    rows.push_back(std::move(row));
  }
  doc["transitions"] = std::move(rows);
  return doc;
}

std::string serialize(const Machine& machine) { return to_json(machine).dump(1) + "\n"; }

MachineData machine_data_from_json(const json& doc) {
  try {
    if (doc.at("format") != "gradual-machine") throw ValidationError("not a machine document");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw ValidationError("unsupported machine format version");
    MachineData d;
    const bool process = doc.at("kind") == "process";
    d.outputs = doc.at("outputs").get<std::vector<std::string>>();
    d.states = doc.at("states").get<std::vector<std::string>>();
    if (!process) d.inputs = doc.at("inputs").get<std::vector<std::string>>();
    const std::size_t width = process ? 4 : 5;
    for (const auto& row : doc.at("transitions")) {
      if (row.size() != width && row.size() != width + 1)
        throw ValidationError("malformed transition tuple " + row.dump());
      Transition t;
      t.from = row[0].get<std::size_t>();
      t.output = row[1].get<std::size_t>();
      if (process) {
        t.to = row[2].get<std::size_t>();
        t.p = row[3].get<double>();
      } else {
        t.input = row[2].get<std::size_t>();
        t.to = row[3].get<std::size_t>();
        t.p = row[4].get<double>();
      }
      if (row.size() == width + 1) t.kind = kind_from(row[width].get<std::string>());
      d.transitions.push_back(t);
    }
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed machine document: ") + e.what());
  }
}

namespace {

json parse_doc(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("machine document is not valid JSON: ") + e.what());
  }
}

}  // namespace

EpsilonMachine read_epsilon_machine(const std::string& text) {
  return EpsilonMachine(machine_data_from_json(parse_doc(text)));
}

EpsilonTransducer read_transducer(const std::string& text) {
  return EpsilonTransducer(machine_data_from_json(parse_doc(text)));
}

RawMachine read_raw_machine(const std::string& text) {
  return RawMachine(machine_data_from_json(parse_doc(text)));
}

Simulation simulate(const EpsilonMachine& machine, std::size_t n, std::uint64_t seed, std::size_t start) {
  if (start >= machine.state_count()) throw ValidationError("simulation start state out of range");
  Simulation sim;
  sim.outputs.reserve(n);
  sim.states.reserve(n);
  Rng rng(seed);
  std::size_t s = start;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = machine.outgoing(s, 0);
    double u = rng.uniform();
    const Transition* pick = &row.back();
    for (const auto& t : row) {
      if (u < t.p) {
        pick = &t;
        break;
      }
      u -= t.p;
    }
    sim.states.push_back(s);
    sim.outputs.push_back(pick->output);
    s = pick->to;
  }
  return sim;
}

}  // namespace gradual

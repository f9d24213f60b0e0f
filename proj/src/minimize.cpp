#include "gradual/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "gradual/errors.hpp"

namespace gradual {
namespace {

// Probabilities are compared on a 1e-12 grid so that values produced by
// different arithmetic paths still match.
std::int64_t quantize(double p) { return std::llround(p * 1e12); }

void require_unifilar(const RawMachine& raw) {
  std::vector<UnifilarityWitness> ws;
  const auto& ts = raw.transitions();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const auto& a = ts[i - 1];
    const auto& b = ts[i];
    if (a.from == b.from && a.input == b.input && a.output == b.output) {
      const UnifilarityWitness w{a.from, a.input, a.output};
      if (ws.empty() || ws.back().state != w.state || ws.back().input != w.input || ws.back().output != w.output)
        ws.push_back(w);
    }
  }
  if (!ws.empty()) throw NotUnifilar(std::move(ws));
}

// Renumbers blocks by lowest member.
std::size_t canonicalize(std::vector<std::size_t>& block) {
  std::map<std::size_t, std::size_t> order;
  for (std::size_t s = 0; s < block.size(); ++s) order.try_emplace(block[s], order.size());
  for (auto& b : block) b = order.at(b);
  return order.size();
}

}  // namespace

std::vector<std::size_t> equivalence_classes(const RawMachine& raw) {
  require_unifilar(raw);
  const std::size_t n = raw.state_count();

  using Sig = std::vector<std::int64_t>;
  std::vector<std::size_t> block(n);
  {
    std::map<Sig, std::size_t> ids;
    for (std::size_t s = 0; s < n; ++s) {
      Sig sig;
      for (const auto& t : raw.outgoing(s)) {
        sig.push_back(static_cast<std::int64_t>(t.input));
        sig.push_back(static_cast<std::int64_t>(t.output));
        sig.push_back(quantize(t.p));
      }
      block[s] = ids.try_emplace(std::move(sig), ids.size()).first->second;
    }
  }
  std::size_t count = canonicalize(block);

  for (;;) {
    std::map<Sig, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      Sig sig{static_cast<std::int64_t>(block[s])};
      for (const auto& t : raw.outgoing(s)) sig.push_back(static_cast<std::int64_t>(block[t.to]));
      next[s] = ids.try_emplace(std::move(sig), ids.size()).first->second;
    }
    const std::size_t refined = canonicalize(next);
    block = std::move(next);
    if (refined == count) break;
    count = refined;
  }
  return block;
}

namespace {

MachineData quotient(const RawMachine& raw) {
  const auto block = equivalence_classes(raw);
  const std::size_t nb = block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
  std::vector<std::size_t> rep(nb, Machine::npos);
  for (std::size_t s = 0; s < raw.state_count(); ++s)
    if (rep[block[s]] == Machine::npos) rep[block[s]] = s;

  MachineData d;
  d.inputs = raw.inputs();
  d.outputs = raw.outputs();
  for (std::size_t b = 0; b < nb; ++b) {
    d.states.push_back(raw.states()[rep[b]]);
    for (const auto& t : raw.outgoing(rep[b])) {
      Transition m = t;
      m.from = b;
      m.to = block[t.to];
      d.transitions.push_back(m);
    }
  }
  return d;
}

}  // namespace

EpsilonTransducer minimize(const RawMachine& raw) { return EpsilonTransducer(quotient(raw)); }

EpsilonMachine minimize_process(const RawMachine& raw) {
  if (raw.input_count() != 1) throw ValidationError("minimize_process needs a single-input machine");
  return EpsilonMachine(quotient(raw));
}

}  // namespace gradual

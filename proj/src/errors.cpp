#include "gradual/errors.hpp"

namespace gradual {
namespace {

std::string describe_classes(const std::vector<std::vector<std::size_t>>& classes) {
  std::string out = "chain has " + std::to_string(classes.size()) + " recurrent classes:";
  for (const auto& c : classes) {
    out += " {";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
    out += "}";
  }
  return out;
}

std::string describe_witnesses(const std::vector<UnifilarityWitness>& ws) {
  std::string out = "machine is not unifilar at";
  for (const auto& w : ws)
    out += " (state " + std::to_string(w.state) + ", input " + std::to_string(w.input) + ", output " +
           std::to_string(w.output) + ")";
  return out;
}

}  // namespace

NonErgodic::NonErgodic(std::vector<std::vector<std::size_t>> classes)
    : Error(describe_classes(classes)), classes_(std::move(classes)) {}

NotUnifilar::NotUnifilar(std::vector<UnifilarityWitness> witnesses)
    : Error(describe_witnesses(witnesses)), witnesses_(std::move(witnesses)) {}

}  // namespace gradual

#pragma once

// Causal-state splitting reconstruction of an epsilon-machine from one long
// observed symbol sequence.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gradual/machine.hpp"

namespace gradual {

struct SymbolSequence {
  std::vector<std::string> alphabet;  // sorted labels
  std::vector<std::uint32_t> symbols;  // indices into alphabet
};

// One symbol per byte.
SymbolSequence read_binary_sequence(std::istream& in);
// One symbol per non-empty line; the line text is the label.
SymbolSequence read_line_sequence(std::istream& in);
// Labels given by index, alphabet taken as-is.
SymbolSequence make_sequence(std::vector<std::string> alphabet, std::vector<std::uint32_t> symbols);

struct CssrOptions {
  std::size_t l_max = 4;
  double alpha = 0.001;
  // Reachable states with fewer observed histories than this are rejected.
  std::uint64_t min_count = 5;
};

struct Reconstruction {
  EpsilonMachine machine;
  std::vector<std::string> warnings;
  std::size_t histories = 0;
};

// Throws InsufficientData if the sequence is too short to fill a single
// history or a recurrent state rests on fewer than min_count observations.
Reconstruction reconstruct_from_sequence(const SymbolSequence& sequence, const CssrOptions& options = {});

}  // namespace gradual

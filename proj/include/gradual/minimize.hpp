#pragma once

#include "gradual/machine.hpp"

namespace gradual {

// Merges states with identical conditional output behaviour at every depth.
// Blocks start from per-input output distributions and are refined until
// each block's successors are block-stable.  Result states are ordered by
// their lowest-numbered member and named after it, so equal inputs give
// byte-identical outputs.  Throws NotUnifilar listing every (state, input,
// output) with more than one successor.
EpsilonTransducer minimize(const RawMachine& raw);

// Same, for single-input machines.
EpsilonMachine minimize_process(const RawMachine& raw);

// Block index of every raw state after refinement.
std::vector<std::size_t> equivalence_classes(const RawMachine& raw);

}  // namespace gradual

#pragma once

#include <string>
#include <vector>

namespace mvmol::testing {

/// Small molecule corpus covering rings, fused/spiro/bridged systems,
/// heteroaromatics, charges, isotopes, stereo markers and fragments.
const std::vector<std::string>& smiles_corpus();

/// Small patterns for substructure checks.
const std::vector<std::string>& pattern_corpus();

}  // namespace mvmol::testing

#pragma once

#include <cstddef>
#include <stdexcept>

#include "mvmol/chem/molecule.hpp"

namespace mvmol::chem {

inline constexpr std::size_t kMaxPatternHeavyAtoms = 32;

class PatternTooLarge : public std::runtime_error {
 public:
  explicit PatternTooLarge(std::size_t heavy_atoms);
};

struct MatchResult {
  bool matched = false;
  /// Number of distinct target atom sets covered by a match.
  std::size_t count = 0;
};

/// Subgraph monomorphism respecting element, aromatic flag and bond order.
/// Both molecules should come from parse_smiles so aromaticity agrees.
MatchResult match_substructure(const Molecule& pattern, const Molecule& target);

}  // namespace mvmol::chem

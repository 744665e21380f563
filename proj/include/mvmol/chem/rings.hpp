#pragma once

#include <cstddef>
#include <vector>

#include "mvmol/chem/molecule.hpp"

namespace mvmol::chem {

struct RingInfo {
  /// Minimum cycle basis; each ring lists atoms in cycle order.
  std::vector<std::vector<int>> rings;
  /// Bond indices of each ring, parallel to rings (bond k joins atom k and k+1).
  std::vector<std::vector<int>> ring_bonds;
  std::vector<bool> atom_in_ring;
  std::vector<bool> bond_in_ring;

  std::size_t ring_count() const { return rings.size(); }
};

/// Cycle rank: bonds - atoms + connected components.
std::size_t cycle_rank(const Molecule& mol);

/// Minimum cycle basis via Horton candidate cycles and GF(2) elimination.
/// Its size always equals cycle_rank(mol).
RingInfo perceive_rings(const Molecule& mol);

/// Lowercase atoms are already aromatic. Additionally flags every 6-ring of
/// C/N atoms whose bonds alternate single/double (bonds already aromatic act
/// as either), iterated to a fixpoint so fused Kekule systems are covered.
/// Flagged rings have their atoms and bonds marked aromatic.
Molecule perceive_aromaticity(Molecule mol);

/// Rings of the basis whose bonds are all aromatic.
std::size_t aromatic_ring_count(const Molecule& mol, const RingInfo& rings);

}  // namespace mvmol::chem

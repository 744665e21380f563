#pragma once

#include <string>

#include "mvmol/chem/molecule.hpp"

namespace mvmol::chem {

/// Bemis-Murcko scaffold: ring systems plus the linker paths between them,
/// with exocyclic atoms double-bonded to a retained atom kept. Acyclic input
/// yields the empty molecule, which is the shared scaffold of all acyclic
/// molecules.
Molecule murcko_scaffold(const Molecule& mol);

/// Deterministic isomorphism-invariant key over elements, aromatic flags,
/// charges, isotopes and bond orders. Hydrogen counts are not part of the key.
/// The empty molecule maps to "".
std::string canonical_key(const Molecule& mol);

}  // namespace mvmol::chem

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mvmol/chem/molecule.hpp"

namespace mvmol::chem {

enum class SmilesErrorKind {
  EmptyInput,
  UnbalancedBranch,
  UnclosedRingBond,
  UnknownElement,
  MalformedBracketAtom,
  InvalidBond,
  UnexpectedCharacter,
};

std::string_view to_string(SmilesErrorKind kind);

class SmilesError : public std::runtime_error {
 public:
  SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail);

  SmilesErrorKind kind() const { return kind_; }
  /// Byte offset into the untrimmed input.
  std::size_t offset() const { return offset_; }

 private:
  SmilesErrorKind kind_;
  std::size_t offset_;
};

/// Parses a SMILES string, assigns implicit hydrogens and perceives
/// aromaticity. Stereo markers are accepted and dropped.
Molecule parse_smiles(std::string_view text);

/// Graph construction only: no hydrogen assignment or aromaticity perception.
Molecule parse_smiles_graph(std::string_view text);

/// Fills implicit_h for organic-subset atoms from default valences. Bracket
/// atoms take their explicit count. Over-valent atoms are clamped to 0 H and
/// flagged with Atom::valence_clamped.
Molecule assign_implicit_hydrogens(Molecule mol);

}  // namespace mvmol::chem

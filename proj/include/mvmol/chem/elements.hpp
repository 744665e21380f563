#pragma once

#include <optional>
#include <string_view>

namespace mvmol::chem {

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  double standard_weight;  // Da, 3 decimals
};

/// Looks up an element by its case-sensitive symbol ("C", "Cl", "Se").
const ElementInfo* find_element(std::string_view symbol);

/// Element by atomic number in [1, 118]; throws std::out_of_range otherwise.
const ElementInfo& element(int atomic_number);

/// Atomic mass of a specific isotope. Falls back to the mass number when the
/// isotope is not in the shipped table.
double isotope_mass(int atomic_number, int mass_number);

inline constexpr double kHydrogenWeight = 1.008;

}  // namespace mvmol::chem

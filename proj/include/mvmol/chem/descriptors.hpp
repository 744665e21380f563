#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "mvmol/chem/molecule.hpp"

namespace mvmol::chem {

enum class DescriptorId : std::size_t {
  MolecularWeight,
  HeavyAtomCount,
  RingCount,
  AromaticRingCount,
  HbdCount,
  HbaCount,
  RotatableBondCount,
  HalogenCount,
  NetFormalCharge,
};

inline constexpr std::size_t kDescriptorCount = 9;

inline constexpr std::array<std::string_view, kDescriptorCount> kDescriptorNames{
    "molecular_weight", "heavy_atom_count",     "ring_count",    "aromatic_ring_count",
    "hbd_count",        "hba_count",            "rotatable_bond_count", "halogen_count",
    "net_formal_charge",
};

std::string_view descriptor_name(DescriptorId id);
std::optional<DescriptorId> find_descriptor(std::string_view name);

/// One value per shipped descriptor. Counts are stored as exact reals.
class DescriptorSet {
 public:
  double operator[](DescriptorId id) const { return values_[static_cast<std::size_t>(id)]; }
  double& operator[](DescriptorId id) { return values_[static_cast<std::size_t>(id)]; }
  const std::array<double, kDescriptorCount>& values() const { return values_; }

 private:
  std::array<double, kDescriptorCount> values_{};
};

/// Standard atomic weights plus 1.008 per hydrogen; isotopic atoms use the
/// isotope mass.
double molecular_weight(const Molecule& mol);

/// Expects a molecule from parse_smiles (hydrogens and aromaticity assigned).
DescriptorSet compute_descriptors(const Molecule& mol);

}  // namespace mvmol::chem

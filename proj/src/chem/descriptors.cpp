#include "mvmol/chem/descriptors.hpp"

#include "mvmol/chem/elements.hpp"
#include "mvmol/chem/rings.hpp"

namespace mvmol::chem {

std::string_view descriptor_name(DescriptorId id) {
  return kDescriptorNames[static_cast<std::size_t>(id)];
}

std::optional<DescriptorId> find_descriptor(std::string_view name) {
  for (std::size_t i = 0; i < kDescriptorNames.size(); ++i) {
    if (kDescriptorNames[i] == name) return static_cast<DescriptorId>(i);
  }
  return std::nullopt;
}

double molecular_weight(const Molecule& mol) {
  double total = 0.0;
  for (const Atom& atom : mol.atoms()) {
    total += atom.isotope ? isotope_mass(atom.atomic_number, *atom.isotope)
                          : element(atom.atomic_number).standard_weight;
    total += kHydrogenWeight * atom.implicit_h;
  }
  return total;
}

namespace {

bool is_halogen(int z) { return z == 9 || z == 17 || z == 35 || z == 53; }
bool is_n_or_o(int z) { return z == 7 || z == 8; }

// Carbonyl carbon: carbon double-bonded to oxygen.
bool is_carbonyl_carbon(const Molecule& mol, int atom) {
  if (mol.atom(atom).atomic_number != 6) return false;
  for (const auto& nb : mol.neighbors(atom)) {
    if (mol.atom(nb.atom).atomic_number == 8 && mol.bond(nb.bond).order == BondOrder::Double) {
      return true;
    }
  }
  return false;
}

bool is_amide_bond(const Molecule& mol, const Bond& bond) {
  const int zb = mol.atom(bond.begin).atomic_number;
  const int ze = mol.atom(bond.end).atomic_number;
  if (zb == 6 && ze == 7) return is_carbonyl_carbon(mol, bond.begin);
  if (zb == 7 && ze == 6) return is_carbonyl_carbon(mol, bond.end);
  return false;
}

}  // namespace

DescriptorSet compute_descriptors(const Molecule& mol) {
  const RingInfo rings = perceive_rings(mol);
  DescriptorSet d;
  d[DescriptorId::MolecularWeight] = molecular_weight(mol);
  d[DescriptorId::RingCount] = static_cast<double>(rings.ring_count());
  d[DescriptorId::AromaticRingCount] = static_cast<double>(aromatic_ring_count(mol, rings));

  int heavy = 0, hbd = 0, hba = 0, halogens = 0, charge = 0;
  for (int i = 0; i < static_cast<int>(mol.atom_count()); ++i) {
    const Atom& atom = mol.atom(i);
    charge += atom.formal_charge;
    if (atom.is_hydrogen()) continue;
    ++heavy;
    if (is_halogen(atom.atomic_number)) ++halogens;
    if (is_n_or_o(atom.atomic_number)) {
      ++hba;
      if (mol.total_hydrogens(i) > 0) ++hbd;
    }
  }

  int rotatable = 0;
  for (std::size_t b = 0; b < mol.bond_count(); ++b) {
    const Bond& bond = mol.bond(static_cast<int>(b));
    if (bond.order != BondOrder::Single || rings.bond_in_ring[b]) continue;
    if (mol.atom(bond.begin).is_hydrogen() || mol.atom(bond.end).is_hydrogen()) continue;
    if (mol.heavy_degree(bond.begin) < 2 || mol.heavy_degree(bond.end) < 2) continue;
    if (is_amide_bond(mol, bond)) continue;
    ++rotatable;
  }

  d[DescriptorId::HeavyAtomCount] = heavy;
  d[DescriptorId::HbdCount] = hbd;
  d[DescriptorId::HbaCount] = hba;
  d[DescriptorId::RotatableBondCount] = rotatable;
  d[DescriptorId::HalogenCount] = halogens;
  d[DescriptorId::NetFormalCharge] = charge;
  return d;
}

}  // namespace mvmol::chem

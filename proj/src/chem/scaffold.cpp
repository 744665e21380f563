#include "mvmol/chem/scaffold.hpp"

#include <vector>

#include "mvmol/chem/rings.hpp"
#include "mvmol/chem/smiles.hpp"

namespace mvmol::chem {

Molecule murcko_scaffold(const Molecule& mol) {
  const RingInfo rings = perceive_rings(mol);
  const std::size_t n = mol.atom_count();
  if (rings.ring_count() == 0) return Molecule{};

  // Prune degree-1 non-ring atoms until nothing changes. What remains is the
  // ring atoms plus linkers; fragments without rings vanish entirely.
  std::vector<bool> keep(n, true);
  std::vector<int> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = mol.degree(static_cast<int>(i));
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rings.atom_in_ring[i] && degree[i] <= 1) stack.push_back(static_cast<int>(i));
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (!keep[static_cast<std::size_t>(u)]) continue;
    keep[static_cast<std::size_t>(u)] = false;
    for (const auto& nb : mol.neighbors(u)) {
      const auto v = static_cast<std::size_t>(nb.atom);
      if (!keep[v]) continue;
      if (--degree[v] <= 1 && !rings.atom_in_ring[v]) stack.push_back(nb.atom);
    }
  }

  std::vector<bool> core = keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (const auto& nb : mol.neighbors(static_cast<int>(i))) {
      if (!core[static_cast<std::size_t>(nb.atom)] && mol.bond(nb.bond).order == BondOrder::Double) {
        keep[static_cast<std::size_t>(nb.atom)] = true;
      }
    }
  }
  return assign_implicit_hydrogens(mol.subgraph(keep));
}

}  // namespace mvmol::chem

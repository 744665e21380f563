#include "mvmol/chem/rings.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>

namespace mvmol::chem {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  std::size_t length;
  EdgeSet edges;
};

EdgeSet make_edge_set(std::size_t bond_count) { return EdgeSet((bond_count + 63) / 64, 0); }

void toggle(EdgeSet& s, int bond) {
  s[static_cast<std::size_t>(bond) / 64] ^= (std::uint64_t{1} << (static_cast<std::size_t>(bond) % 64));
}

bool test(const EdgeSet& s, std::size_t bond) { return (s[bond / 64] >> (bond % 64)) & 1U; }

bool is_zero(const EdgeSet& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
}

int lowest_bit(const EdgeSet& s) {
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (s[w] != 0) return static_cast<int>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(s[w])));
  }
  return -1;
}

// Orders the edge set of a simple cycle into an atom walk.
void order_cycle(const Molecule& mol, const EdgeSet& edges, std::vector<int>& atoms,
                 std::vector<int>& bonds) {
  std::vector<int> cycle_bonds;
  for (std::size_t b = 0; b < mol.bond_count(); ++b) {
    if (test(edges, b)) cycle_bonds.push_back(static_cast<int>(b));
  }
  atoms.clear();
  bonds.clear();
  if (cycle_bonds.empty()) return;
  // Start from the lowest atom index for a stable representation.
  int start = mol.bond(cycle_bonds.front()).begin;
  for (int b : cycle_bonds) start = std::min({start, mol.bond(b).begin, mol.bond(b).end});
  int current = start;
  int previous_bond = -1;
  do {
    atoms.push_back(current);
    int chosen = -1;
    for (const auto& nb : mol.neighbors(current)) {
      if (nb.bond != previous_bond && test(edges, static_cast<std::size_t>(nb.bond))) {
        if (chosen < 0 || mol.bond(nb.bond).other(current) < mol.bond(chosen).other(current)) {
          chosen = nb.bond;
        }
      }
    }
    bonds.push_back(chosen);
    previous_bond = chosen;
    current = mol.bond(chosen).other(current);
  } while (current != start && atoms.size() <= cycle_bonds.size());
}

}  // namespace

std::size_t cycle_rank(const Molecule& mol) {
  return mol.bond_count() + mol.component_count() - mol.atom_count();
}

RingInfo perceive_rings(const Molecule& mol) {
  RingInfo info;
  const std::size_t n = mol.atom_count();
  info.atom_in_ring.assign(n, false);
  info.bond_in_ring.assign(mol.bond_count(), false);
  const std::size_t rank = cycle_rank(mol);
  if (rank == 0) return info;

  // Horton candidates: for every root v and edge (x, y), the cycle formed by
  // the BFS-tree paths v->x, v->y and the edge itself, when the paths meet
  // only at v.
  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen;
  std::vector<int> dist(n), parent_bond(n);
  for (std::size_t root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_bond.begin(), parent_bond.end(), -1);
    std::deque<int> queue{static_cast<int>(root)};
    dist[root] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& nb : mol.neighbors(u)) {
        if (dist[static_cast<std::size_t>(nb.atom)] < 0) {
          dist[static_cast<std::size_t>(nb.atom)] = dist[static_cast<std::size_t>(u)] + 1;
          parent_bond[static_cast<std::size_t>(nb.atom)] = nb.bond;
          queue.push_back(nb.atom);
        }
      }
    }
    for (std::size_t b = 0; b < mol.bond_count(); ++b) {
      const Bond& bond = mol.bond(static_cast<int>(b));
      const auto x = static_cast<std::size_t>(bond.begin);
      const auto y = static_cast<std::size_t>(bond.end);
      if (dist[x] < 0 || dist[y] < 0) continue;
      if (parent_bond[x] == static_cast<int>(b) || parent_bond[y] == static_cast<int>(b)) continue;
      // Collect path atoms from x and y back to the root; they must be disjoint
      // apart from the root.
      std::vector<int> path_x, path_y;
      for (int a = static_cast<int>(x); a != static_cast<int>(root);
           a = mol.bond(parent_bond[static_cast<std::size_t>(a)]).other(a)) {
        path_x.push_back(a);
      }
      for (int a = static_cast<int>(y); a != static_cast<int>(root);
           a = mol.bond(parent_bond[static_cast<std::size_t>(a)]).other(a)) {
        path_y.push_back(a);
      }
      bool disjoint = true;
      for (int a : path_x) {
        if (std::find(path_y.begin(), path_y.end(), a) != path_y.end()) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) continue;
      EdgeSet edges = make_edge_set(mol.bond_count());
      toggle(edges, static_cast<int>(b));
      for (int a : path_x) toggle(edges, parent_bond[static_cast<std::size_t>(a)]);
      for (int a : path_y) toggle(edges, parent_bond[static_cast<std::size_t>(a)]);
      if (seen.insert(edges).second) {
        candidates.push_back({path_x.size() + path_y.size() + 1, std::move(edges)});
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.edges < b.edges;
  });

  // Greedy GF(2) independence test in order of increasing length.
  std::vector<std::pair<int, EdgeSet>> reduced;  // (pivot bit, row)
  for (const Candidate& cand : candidates) {
    if (info.rings.size() == rank) break;
    EdgeSet row = cand.edges;
    for (const auto& [pivot, basis_row] : reduced) {
      if (test(row, static_cast<std::size_t>(pivot))) {
        for (std::size_t w = 0; w < row.size(); ++w) row[w] ^= basis_row[w];
      }
    }
    if (is_zero(row)) continue;
    reduced.emplace_back(lowest_bit(row), row);
    std::vector<int> atoms, bonds;
    order_cycle(mol, cand.edges, atoms, bonds);
    for (int a : atoms) info.atom_in_ring[static_cast<std::size_t>(a)] = true;
    for (int b : bonds) info.bond_in_ring[static_cast<std::size_t>(b)] = true;
    info.rings.push_back(std::move(atoms));
    info.ring_bonds.push_back(std::move(bonds));
  }
  return info;
}

Molecule perceive_aromaticity(Molecule mol) {
  const RingInfo rings = perceive_rings(mol);
  // An aromatic bond only exists inside a ring; "c1ccccc1c1ccccc1" joins its
  // rings with a single bond.
  for (std::size_t b = 0; b < mol.bond_count(); ++b) {
    if (!rings.bond_in_ring[b] && mol.bond(static_cast<int>(b)).order == BondOrder::Aromatic) {
      mol.bond(static_cast<int>(b)).order = BondOrder::Single;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < rings.rings.size(); ++r) {
      const auto& atoms = rings.rings[r];
      const auto& bonds = rings.ring_bonds[r];
      if (atoms.size() != 6) continue;
      const bool carbon_nitrogen = std::all_of(atoms.begin(), atoms.end(), [&](int a) {
        const int z = mol.atom(a).atomic_number;
        return z == 6 || z == 7;
      });
      if (!carbon_nitrogen) continue;
      const bool all_aromatic = std::all_of(bonds.begin(), bonds.end(), [&](int b) {
        return mol.bond(b).order == BondOrder::Aromatic;
      });
      if (all_aromatic) continue;
      bool alternates = false;
      for (int parity = 0; parity < 2 && !alternates; ++parity) {
        bool ok = true;
        for (std::size_t k = 0; k < bonds.size() && ok; ++k) {
          const BondOrder order = mol.bond(bonds[k]).order;
          if (order == BondOrder::Aromatic) continue;
          const BondOrder expected =
              (static_cast<int>(k % 2) == parity) ? BondOrder::Double : BondOrder::Single;
          ok = order == expected;
        }
        alternates = ok;
      }
      if (!alternates) continue;
      for (int a : atoms) mol.atom(a).aromatic = true;
      for (int b : bonds) mol.bond(b).order = BondOrder::Aromatic;
      changed = true;
    }
  }
  return mol;
}

std::size_t aromatic_ring_count(const Molecule& mol, const RingInfo& rings) {
  std::size_t count = 0;
  for (const auto& bonds : rings.ring_bonds) {
    const bool aromatic = std::all_of(bonds.begin(), bonds.end(), [&](int b) {
      return mol.bond(b).order == BondOrder::Aromatic;
    });
    if (aromatic) ++count;
  }
  return count;
}

}  // namespace mvmol::chem

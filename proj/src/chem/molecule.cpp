#include "mvmol/chem/molecule.hpp"

#include <algorithm>
#include <stdexcept>

#include "mvmol/chem/elements.hpp"

namespace mvmol::chem {

int valence_contribution(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;
  }
  return 1;
}

char bond_symbol(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return '-';
    case BondOrder::Double: return '=';
    case BondOrder::Triple: return '#';
    case BondOrder::Aromatic: return ':';
  }
  return '-';
}

std::string_view Atom::symbol() const { return element(atomic_number).symbol; }

int Molecule::add_atom(const Atom& atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size() - 1);
}

int Molecule::add_bond(int a, int b, BondOrder order) {
  const int n = static_cast<int>(atoms_.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("bond endpoint out of range");
  if (a == b) throw std::invalid_argument("self-loop bond");
  if (find_bond(a, b) >= 0) throw std::invalid_argument("duplicate bond");
  const int idx = static_cast<int>(bonds_.size());
  bonds_.push_back({a, b, order});
  adjacency_[static_cast<std::size_t>(a)].push_back({b, idx});
  adjacency_[static_cast<std::size_t>(b)].push_back({a, idx});
  return idx;
}

int Molecule::heavy_degree(int atom) const {
  int d = 0;
  for (const auto& nb : neighbors(atom)) {
    if (!atoms_[static_cast<std::size_t>(nb.atom)].is_hydrogen()) ++d;
  }
  return d;
}

int Molecule::find_bond(int a, int b) const {
  for (const auto& nb : adjacency_[static_cast<std::size_t>(a)]) {
    if (nb.atom == b) return nb.bond;
  }
  return -1;
}

int Molecule::total_hydrogens(int atom) const {
  int h = atoms_[static_cast<std::size_t>(atom)].implicit_h;
  for (const auto& nb : neighbors(atom)) {
    if (atoms_[static_cast<std::size_t>(nb.atom)].is_hydrogen()) ++h;
  }
  return h;
}

std::vector<int> Molecule::component_labels() const {
  std::vector<int> label(atoms_.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < atoms_.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(static_cast<int>(s));
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(u)) {
        if (label[static_cast<std::size_t>(nb.atom)] < 0) {
          label[static_cast<std::size_t>(nb.atom)] = next;
          stack.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t Molecule::component_count() const {
  int max_label = -1;
  for (int l : component_labels()) max_label = std::max(max_label, l);
  return static_cast<std::size_t>(max_label + 1);
}

Molecule Molecule::permuted(std::span<const int> order) const {
  if (order.size() != atoms_.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> new_index(atoms_.size(), -1);
  Molecule out(source_smiles_);
  for (std::size_t i = 0; i < order.size(); ++i) {
    new_index[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    out.add_atom(atoms_[static_cast<std::size_t>(order[i])]);
  }
  for (const auto& b : bonds_) {
    out.add_bond(new_index[static_cast<std::size_t>(b.begin)],
                 new_index[static_cast<std::size_t>(b.end)], b.order);
  }
  return out;
}

Molecule Molecule::subgraph(const std::vector<bool>& keep) const {
  std::vector<int> new_index(atoms_.size(), -1);
  Molecule out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (keep[i]) new_index[i] = out.add_atom(atoms_[i]);
  }
  for (const auto& b : bonds_) {
    const int a = new_index[static_cast<std::size_t>(b.begin)];
    const int c = new_index[static_cast<std::size_t>(b.end)];
    if (a >= 0 && c >= 0) out.add_bond(a, c, b.order);
  }
  return out;
}

}  // namespace mvmol::chem

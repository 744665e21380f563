#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mvmol::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

/// Integer contribution of a bond to valence; aromatic bonds count 1 here and
/// the pi contribution is handled in hydrogen assignment.
int valence_contribution(BondOrder order);
char bond_symbol(BondOrder order);

struct Atom {
  int atomic_number = 6;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  std::optional<int> explicit_h;  // set for bracket atoms only
  int implicit_h = 0;
  bool bracket = false;
  bool valence_clamped = false;  // implicit H clamped to 0 on an over-valent atom

  std::string_view symbol() const;
  bool is_hydrogen() const { return atomic_number == 1; }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Undirected molecular graph. Atom order is insertion order (SMILES token
/// order for parsed molecules).
class Molecule {
 public:
  Molecule() = default;
  explicit Molecule(std::string source_smiles) : source_smiles_(std::move(source_smiles)) {}

  int add_atom(const Atom& atom);
  /// Throws std::invalid_argument on bad endpoints, self-loops or duplicates.
  int add_bond(int a, int b, BondOrder order);

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  Atom& atom(int i) { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  Bond& bond(int i) { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const { return static_cast<int>(neighbors(atom).size()); }
  /// Degree counting only non-hydrogen neighbours.
  int heavy_degree(int atom) const;
  /// Index of the bond between a and b, or -1.
  int find_bond(int a, int b) const;

  /// Hydrogens on the atom: implicit/bracket count plus explicit [H] neighbours.
  int total_hydrogens(int atom) const;

  /// Connected-component label per atom, labels dense from 0.
  std::vector<int> component_labels() const;
  std::size_t component_count() const;

  const std::string& source_smiles() const { return source_smiles_; }
  void set_source_smiles(std::string s) { source_smiles_ = std::move(s); }

  /// Copy with atoms reordered so that new index i holds old atom order[i].
  Molecule permuted(std::span<const int> order) const;

  /// Induced subgraph over the atoms flagged in keep (original relative order).
  Molecule subgraph(const std::vector<bool>& keep) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::string source_smiles_;
};

}  // namespace mvmol::chem

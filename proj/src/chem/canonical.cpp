#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "mvmol/chem/scaffold.hpp"

namespace mvmol::chem {
namespace {

using Ranks = std::vector<int>;

// Dense ranks (0..k-1) from arbitrary sortable keys.
template <typename Key>
Ranks rank_by(const std::vector<Key>& keys) {
  std::vector<int> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  Ranks ranks(keys.size());
  int r = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && keys[static_cast<std::size_t>(idx[i - 1])] < keys[static_cast<std::size_t>(idx[i])]) ++r;
    ranks[static_cast<std::size_t>(idx[i])] = r;
  }
  return ranks;
}

int class_count(const Ranks& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Molecule& mol) : mol_(mol) {}

  std::string run() {
    using AtomKey = std::tuple<int, int, int, int, int>;
    std::vector<AtomKey> keys;
    keys.reserve(mol_.atom_count());
    for (int i = 0; i < static_cast<int>(mol_.atom_count()); ++i) {
      const Atom& a = mol_.atom(i);
      keys.emplace_back(a.atomic_number, a.aromatic ? 1 : 0, a.formal_charge, a.isotope.value_or(0),
                        mol_.degree(i));
    }
    search(refine(rank_by(keys)));
    return best_;
  }

 private:
  // Iterative neighbourhood refinement: split classes by the sorted multiset of
  // (bond order, neighbour class) until the partition is stable.
  Ranks refine(Ranks ranks) const {
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    int classes = class_count(ranks);
    while (true) {
      std::vector<Key> keys(mol_.atom_count());
      for (int i = 0; i < static_cast<int>(mol_.atom_count()); ++i) {
        auto& [own, around] = keys[static_cast<std::size_t>(i)];
        own = ranks[static_cast<std::size_t>(i)];
        for (const auto& nb : mol_.neighbors(i)) {
          around.emplace_back(static_cast<int>(mol_.bond(nb.bond).order), ranks[static_cast<std::size_t>(nb.atom)]);
        }
        std::sort(around.begin(), around.end());
      }
      Ranks next = rank_by(keys);
      const int next_classes = class_count(next);
      ranks = std::move(next);
      if (next_classes == classes) return ranks;
      classes = next_classes;
    }
  }

  // Two tied terminal atoms hanging off the same neighbour by the same bond are
  // interchangeable; exploring one of them is enough.
  bool redundant_trial(int candidate, const std::vector<int>& tried) const {
    if (mol_.degree(candidate) != 1) return false;
    const auto& nb = mol_.neighbors(candidate)[0];
    for (int other : tried) {
      if (mol_.degree(other) != 1) continue;
      const auto& onb = mol_.neighbors(other)[0];
      if (onb.atom == nb.atom && mol_.bond(onb.bond).order == mol_.bond(nb.bond).order) return true;
    }
    return false;
  }

  void search(const Ranks& ranks) {
    const int classes = class_count(ranks);
    if (classes == static_cast<int>(mol_.atom_count())) {
      std::string s = serialize(ranks);
      if (!have_best_ || s < best_) {
        best_ = std::move(s);
        have_best_ = true;
      }
      return;
    }
    // Individualize each member of the first non-singleton class in turn.
    std::vector<int> size(static_cast<std::size_t>(classes), 0);
    for (int r : ranks) ++size[static_cast<std::size_t>(r)];
    int target = 0;
    while (size[static_cast<std::size_t>(target)] < 2) ++target;
    std::vector<int> tried;
    for (int atom = 0; atom < static_cast<int>(mol_.atom_count()); ++atom) {
      if (ranks[static_cast<std::size_t>(atom)] != target) continue;
      if (redundant_trial(atom, tried)) continue;
      tried.push_back(atom);
      Ranks split(ranks.size());
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        split[i] = 2 * ranks[i] + ((ranks[i] == target && static_cast<int>(i) != atom) ? 1 : 0);
      }
      search(refine(rank_by(split)));
    }
  }

  std::string serialize(const Ranks& ranks) const {
    const std::size_t n = mol_.atom_count();
    std::vector<int> by_rank(n);
    for (std::size_t i = 0; i < n; ++i) by_rank[static_cast<std::size_t>(ranks[i])] = static_cast<int>(i);
    std::string out;
    for (int atom : by_rank) {
      const Atom& a = mol_.atom(atom);
      out += std::to_string(a.atomic_number);
      if (a.aromatic) out += 'a';
      if (a.formal_charge != 0) out += (a.formal_charge > 0 ? "+" : "") + std::to_string(a.formal_charge);
      if (a.isotope) out += "i" + std::to_string(*a.isotope);
      out += ',';
    }
    std::vector<std::tuple<int, int, int>> edges;
    for (const Bond& b : mol_.bonds()) {
      int u = ranks[static_cast<std::size_t>(b.begin)];
      int v = ranks[static_cast<std::size_t>(b.end)];
      if (u > v) std::swap(u, v);
      edges.emplace_back(u, v, static_cast<int>(b.order));
    }
    std::sort(edges.begin(), edges.end());
    out += '|';
    for (const auto& [u, v, order] : edges) {
      out += std::to_string(u) + bond_symbol(static_cast<BondOrder>(order)) + std::to_string(v) + ';';
    }
    return out;
  }

  const Molecule& mol_;
  std::string best_;
  bool have_best_ = false;
};

}  // namespace

std::string canonical_key(const Molecule& mol) {
  if (mol.empty()) return "";
  return Canonicalizer(mol).run();
}

}  // namespace mvmol::chem

#include "mvmol/chem/substructure.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <vector>

namespace mvmol::chem {

PatternTooLarge::PatternTooLarge(std::size_t heavy_atoms)
    : std::runtime_error("PatternTooLarge: pattern has " + std::to_string(heavy_atoms) +
                         " heavy atoms (limit " + std::to_string(kMaxPatternHeavyAtoms) + ")") {}

namespace {

class Matcher {
 public:
  Matcher(const Molecule& pattern, const Molecule& target)
      : pattern_(pattern), target_(target), mapping_(pattern.atom_count(), -1),
        used_(target.atom_count(), false) {
    build_order();
  }

  void run() { extend(0); }

  std::size_t distinct_sets() const { return sets_.size(); }

 private:
  // Pattern atoms in BFS order per component; parent_[k] is an already-placed
  // neighbour of order_[k] (or -1 for component roots).
  void build_order() {
    const std::size_t n = pattern_.atom_count();
    std::vector<bool> placed(n, false);
    for (std::size_t root = 0; root < n; ++root) {
      if (placed[root]) continue;
      std::deque<int> queue{static_cast<int>(root)};
      placed[root] = true;
      order_.push_back(static_cast<int>(root));
      parent_.push_back(-1);
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const auto& nb : pattern_.neighbors(u)) {
          if (!placed[static_cast<std::size_t>(nb.atom)]) {
            placed[static_cast<std::size_t>(nb.atom)] = true;
            order_.push_back(nb.atom);
            parent_.push_back(u);
            queue.push_back(nb.atom);
          }
        }
      }
    }
  }

  bool atom_compatible(int p, int t) const {
    const Atom& pa = pattern_.atom(p);
    const Atom& ta = target_.atom(t);
    return pa.atomic_number == ta.atomic_number && pa.aromatic == ta.aromatic;
  }

  bool bonds_consistent(int p, int t) const {
    for (const auto& nb : pattern_.neighbors(p)) {
      const int mapped = mapping_[static_cast<std::size_t>(nb.atom)];
      if (mapped < 0) continue;
      const int tb = target_.find_bond(t, mapped);
      if (tb < 0 || target_.bond(tb).order != pattern_.bond(nb.bond).order) return false;
    }
    return true;
  }

  void try_candidate(std::size_t depth, int p, int t) {
    if (used_[static_cast<std::size_t>(t)] || !atom_compatible(p, t) || !bonds_consistent(p, t)) return;
    mapping_[static_cast<std::size_t>(p)] = t;
    used_[static_cast<std::size_t>(t)] = true;
    extend(depth + 1);
    used_[static_cast<std::size_t>(t)] = false;
    mapping_[static_cast<std::size_t>(p)] = -1;
  }

  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      std::vector<std::uint64_t> set((target_.atom_count() + 63) / 64, 0);
      for (int t : mapping_) {
        set[static_cast<std::size_t>(t) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(t) % 64);
      }
      sets_.insert(std::move(set));
      return;
    }
    const int p = order_[depth];
    const int parent = parent_[depth];
    if (parent >= 0) {
      for (const auto& nb : target_.neighbors(mapping_[static_cast<std::size_t>(parent)])) {
        try_candidate(depth, p, nb.atom);
      }
    } else {
      for (int t = 0; t < static_cast<int>(target_.atom_count()); ++t) try_candidate(depth, p, t);
    }
  }

  const Molecule& pattern_;
  const Molecule& target_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<int> mapping_;
  std::vector<bool> used_;
  std::set<std::vector<std::uint64_t>> sets_;
};

}  // namespace

MatchResult match_substructure(const Molecule& pattern, const Molecule& target) {
  std::size_t heavy = 0;
  for (const Atom& a : pattern.atoms()) {
    if (!a.is_hydrogen()) ++heavy;
  }
  if (heavy > kMaxPatternHeavyAtoms) throw PatternTooLarge(heavy);
  if (pattern.empty() || pattern.atom_count() > target.atom_count()) return {};
  Matcher matcher(pattern, target);
  matcher.run();
  const std::size_t count = matcher.distinct_sets();
  return {count > 0, count};
}

}  // namespace mvmol::chem

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mvmol::testing {

std::size_t brute_force_match_count(const chem::Molecule& pattern, const chem::Molecule& target) {
  const std::size_t k = pattern.atom_count();
  const std::size_t n = target.atom_count();
  if (k == 0 || k > n) return 0;

  auto same_label = [&](int p, int t) {
    return pattern.atom(p).atomic_number == target.atom(t).atomic_number &&
           pattern.atom(p).aromatic == target.atom(t).aromatic;
  };

  std::size_t count = 0;
  std::vector<int> subset;
  std::vector<int> assign(k, -1);
  std::vector<bool> taken;

  // Assign pattern atoms 0..k-1 (in index order) to members of the subset,
  // checking bonds among already-assigned pattern atoms.
  std::function<bool(std::size_t)> permute = [&](std::size_t p) -> bool {
    if (p == k) return true;
    for (std::size_t s = 0; s < subset.size(); ++s) {
      if (taken[s] || !same_label(static_cast<int>(p), subset[s])) continue;
      bool ok = true;
      for (std::size_t q = 0; q < p && ok; ++q) {
        const int pb = pattern.find_bond(static_cast<int>(p), static_cast<int>(q));
        if (pb < 0) continue;
        const int tb = target.find_bond(subset[s], assign[q]);
        ok = tb >= 0 && target.bond(tb).order == pattern.bond(pb).order;
      }
      if (!ok) continue;
      taken[s] = true;
      assign[p] = subset[s];
      const bool found = permute(p + 1);
      taken[s] = false;
      if (found) return true;
    }
    return false;
  };

  std::function<void(int)> choose = [&](int next) {
    if (subset.size() == k) {
      taken.assign(k, false);
      if (permute(0)) ++count;
      return;
    }
    for (int t = next; t < static_cast<int>(n); ++t) {
      if (n - static_cast<std::size_t>(t) < k - subset.size()) break;
      subset.push_back(t);
      choose(t + 1);
      subset.pop_back();
    }
  };
  choose(0);
  return count;
}

double pair_count_auc(std::span<const double> scores, std::span<const int> labels) {
  long long concordant = 0, ties = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) ++pos; else ++neg;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) ++concordant;
      else if (scores[i] == scores[j]) ++ties;
    }
  }
  return static_cast<double>(2 * concordant + ties) / static_cast<double>(2 * pos * neg);
}

double scalar_bce(std::span<const double> prob, std::span<const double> label, double eps) {
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double p = prob[i];
    if (p < eps) p = eps;
    if (p > 1.0 - eps) p = 1.0 - eps;
    total += label[i] * std::log(p) + (1.0 - label[i]) * std::log(1.0 - p);
  }
  return -total / static_cast<double>(prob.size());
}

double scalar_rmse(std::span<const double> pred, std::span<const double> target) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = target[i] - pred[i];
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(pred.size()));
}

}  // namespace mvmol::testing

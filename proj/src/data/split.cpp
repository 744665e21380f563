#include "mvmol/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mvmol::data {

DatasetSplit scaffold_split(std::span<const Record> records, const SplitFractions& fractions) {
  const SplitFractions& f = fractions;
  if (!(f.train > 0 && f.valid > 0 && f.test > 0) || std::abs(f.train + f.valid + f.test - 1.0) > 1e-9) {
    throw DataError(DataErrorKind::InvalidSpec, "split fractions must be positive and sum to 1");
  }

  std::map<std::string, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < records.size(); ++i) by_key[records[i].scaffold_key].push_back(i);
  if (by_key.size() < 3) {
    throw DataError(DataErrorKind::TooFewScaffolds,
                    std::to_string(by_key.size()) + " scaffold group(s); a three-way split needs at least 3");
  }

  std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> groups;
  for (const auto& entry : by_key) groups.push_back(&entry);
  // by_key is already ordered by key, so a stable sort on size keeps the key tie-break.
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto* a, const auto* b) { return a->second.size() > b->second.size(); });

  const double n = static_cast<double>(records.size());
  const double train_target = f.train * n;
  const double valid_target = (f.train + f.valid) * n;

  DatasetSplit split;
  split.fractions = fractions;
  int phase = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t left_after = groups.size() - g - 1;
    if (phase == 0 && (static_cast<double>(split.train.size()) >= train_target || left_after < 2)) phase = 1;
    if (phase == 1) {
      const double filled = static_cast<double>(split.train.size() + split.valid.size());
      if ((!split.valid.empty() && filled >= valid_target) || left_after < 1) phase = 2;
    }
    auto& dest = phase == 0 ? split.train : phase == 1 ? split.valid : split.test;
    dest.insert(dest.end(), groups[g]->second.begin(), groups[g]->second.end());
  }
  for (auto* part : {&split.train, &split.valid, &split.test}) std::sort(part->begin(), part->end());
  return split;
}

}  // namespace mvmol::data

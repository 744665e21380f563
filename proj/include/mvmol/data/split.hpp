#pragma once

#include <span>
#include <string>
#include <vector>

#include "mvmol/data/dataset.hpp"

namespace mvmol::data {

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

/// Index lists into the record vector the split was computed from.
struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
  SplitFractions fractions;
};

/// Groups records by scaffold_key, orders groups by size descending then key
/// ascending, and fills train, then valid, then test with whole groups. A
/// split stops taking groups once it reaches its share; while fewer groups
/// remain than empty later splits, those groups are held back so that every
/// split is non-empty. Indices inside each split are ascending.
/// Throws DataError(TooFewScaffolds) below 3 groups and DataError(InvalidSpec)
/// for bad fractions.
DatasetSplit scaffold_split(std::span<const Record> records, const SplitFractions& fractions = {});

}  // namespace mvmol::data

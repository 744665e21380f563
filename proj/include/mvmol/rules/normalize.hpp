#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvmol/rules/evaluate.hpp"
#include "mvmol/rules/ruleset.hpp"

namespace mvmol::rules {

/// Per-numeric-rule z-score parameters. Predicate columns are not listed.
struct NormalizationStats {
  std::size_t rule_count = 0;       // ruleset size the stats were fitted on
  std::vector<std::size_t> columns;  // indices of numeric rules
  std::vector<double> mean;
  std::vector<double> std;           // population std; 0 maps the column to 0

  bool empty() const { return columns.empty(); }
};

/// Fit on training rows only. Throws std::invalid_argument when train_features is empty.
NormalizationStats fit_normalization(const RuleSet& ruleset,
                                     std::span<const RuleFeatureVector> train_features);

/// Throws RuleError(StatsMismatch) if the vector length or flags disagree with stats.
RuleFeatureVector apply_normalization(const NormalizationStats& stats, const RuleFeatureVector& vector);

/// Inverse of apply_normalization. Columns with std 0 come back as the mean.
RuleFeatureVector invert_normalization(const NormalizationStats& stats, const RuleFeatureVector& vector);

}  // namespace mvmol::rules

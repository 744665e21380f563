#include "mvmol/rules/normalize.hpp"

#include <cmath>
#include <stdexcept>

namespace mvmol::rules {
namespace {

void check_shape(const NormalizationStats& stats, const RuleFeatureVector& v, bool want_applied) {
  if (v.values.size() != stats.rule_count) {
    throw RuleError(RuleErrorKind::StatsMismatch, "",
                    "feature vector has " + std::to_string(v.values.size()) +
                        " values but stats were fitted on " + std::to_string(stats.rule_count) +
                        " rules");
  }
  if (v.normalization_applied != want_applied) {
    throw RuleError(RuleErrorKind::StatsMismatch, "",
                    want_applied ? "vector is not normalized" : "vector is already normalized");
  }
}

}  // namespace

NormalizationStats fit_normalization(const RuleSet& ruleset,
                                     std::span<const RuleFeatureVector> train_features) {
  if (train_features.empty()) throw std::invalid_argument("fit_normalization: no training rows");
  NormalizationStats stats;
  stats.rule_count = ruleset.size();
  for (std::size_t i = 0; i < ruleset.size(); ++i) {
    if (ruleset.rules[i].kind == RuleKind::Numeric) stats.columns.push_back(i);
  }
  const double n = static_cast<double>(train_features.size());
  for (std::size_t col : stats.columns) {
    double sum = 0.0;
    for (const auto& row : train_features) {
      if (row.values.size() != stats.rule_count) {
        throw RuleError(RuleErrorKind::StatsMismatch, "", "training row length differs from ruleset size");
      }
      sum += row.values[col];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& row : train_features) {
      const double d = row.values[col] - mean;
      ss += d * d;
    }
    stats.mean.push_back(mean);
    stats.std.push_back(std::sqrt(ss / n));
  }
  return stats;
}

RuleFeatureVector apply_normalization(const NormalizationStats& stats, const RuleFeatureVector& vector) {
  check_shape(stats, vector, false);
  RuleFeatureVector out = vector;
  for (std::size_t k = 0; k < stats.columns.size(); ++k) {
    double& v = out.values[stats.columns[k]];
    v = stats.std[k] > 0.0 ? (v - stats.mean[k]) / stats.std[k] : 0.0;
  }
  out.normalization_applied = true;
  return out;
}

RuleFeatureVector invert_normalization(const NormalizationStats& stats, const RuleFeatureVector& vector) {
  check_shape(stats, vector, true);
  RuleFeatureVector out = vector;
  for (std::size_t k = 0; k < stats.columns.size(); ++k) {
    double& v = out.values[stats.columns[k]];
    v = v * stats.std[k] + stats.mean[k];
  }
  out.normalization_applied = false;
  return out;
}

}  // namespace mvmol::rules

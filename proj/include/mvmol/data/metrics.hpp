#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace mvmol::data {

class SingleClassError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mann-Whitney estimate with midranks: (concordant + ties/2) / (P N).
/// Labels must be 0 or 1. Throws SingleClassError if either class is absent.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Same function as the regression training loss.
double rmse_metric(std::span<const double> predictions, std::span<const double> targets);

}  // namespace mvmol::data

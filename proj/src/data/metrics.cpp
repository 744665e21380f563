#include "mvmol/data/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mvmol/model/loss.hpp"

namespace mvmol::data {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: length mismatch");
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("roc_auc: labels must be 0 or 1");
    if (std::isnan(scores[i])) throw std::invalid_argument("roc_auc: NaN score");
    pos += labels[i] == 1;
  }
  const std::uint64_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw SingleClassError("roc_auc: only one class present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum, with tied groups at their midrank, kept in
  // integers so the result is exactly (2 concordant + ties) / (2 P N).
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    std::uint64_t group_pos = 0;
    for (std::size_t k = i; k < j; ++k) group_pos += labels[order[k]] == 1;
    twice_rank_sum += group_pos * static_cast<std::uint64_t>(i + 1 + j);
    i = j;
  }
  const std::uint64_t twice_u = twice_rank_sum - pos * (pos + 1);
  return static_cast<double>(twice_u) / static_cast<double>(2 * pos * neg);
}

double rmse_metric(std::span<const double> predictions, std::span<const double> targets) {
  return model::loss_regression(predictions, targets);
}

}  // namespace mvmol::data

#include "mvmol/model/loss.hpp"

#include <algorithm>
#include <cmath>

#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {
namespace {

void check(std::span<const double> y_hat, std::span<const double> y, std::span<const std::uint8_t> mask) {
  if (y_hat.size() != y.size() || (!mask.empty() && mask.size() != y.size())) {
    throw ModelError(ModelErrorKind::ShapeMismatch, "prediction, label and mask lengths differ");
  }
}

bool used(std::span<const std::uint8_t> mask, std::size_t i) { return mask.empty() || mask[i] != 0; }

std::size_t count_used(std::span<const std::uint8_t> mask, std::size_t n) {
  if (mask.empty()) return n;
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; }));
}

std::size_t require_nonempty(std::span<const std::uint8_t> mask, std::size_t n) {
  const std::size_t count = count_used(mask, n);
  if (count == 0) throw ModelError(ModelErrorKind::EmptyBatch, "no labelled entries in batch");
  return count;
}

}  // namespace

double loss_classification(std::span<const double> y_hat, std::span<const double> y,
                           std::span<const std::uint8_t> mask) {
  check(y_hat, y, mask);
  const std::size_t n = require_nonempty(mask, y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!used(mask, i)) continue;
    const double p = std::clamp(y_hat[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    total -= y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
  }
  return total / static_cast<double>(n);
}

std::vector<double> loss_classification_grad(std::span<const double> y_hat, std::span<const double> y,
                                             std::span<const std::uint8_t> mask) {
  check(y_hat, y, mask);
  const double n = static_cast<double>(require_nonempty(mask, y.size()));
  std::vector<double> g(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!used(mask, i)) continue;
    const double p = y_hat[i];
    if (p < kProbabilityClamp || p > 1.0 - kProbabilityClamp) continue;  // flat outside the clamp
    g[i] = (-y[i] / p + (1.0 - y[i]) / (1.0 - p)) / n;
  }
  return g;
}

double loss_regression(std::span<const double> y_hat, std::span<const double> y,
                       std::span<const std::uint8_t> mask) {
  check(y_hat, y, mask);
  const std::size_t n = require_nonempty(mask, y.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!used(mask, i)) continue;
    const double r = y[i] - y_hat[i];
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(n));
}

std::vector<double> loss_regression_grad(std::span<const double> y_hat, std::span<const double> y,
                                         std::span<const std::uint8_t> mask) {
  const double rmse = loss_regression(y_hat, y, mask);
  std::vector<double> g(y.size(), 0.0);
  if (rmse == 0.0) return g;
  const double n = static_cast<double>(count_used(mask, y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (used(mask, i)) g[i] = (y_hat[i] - y[i]) / (n * rmse);
  }
  return g;
}

}  // namespace mvmol::model

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mvmol::model {

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean binary cross entropy over entries whose mask byte is nonzero (all
/// entries when mask is empty). Probabilities are clamped to [eps, 1-eps].
/// Throws ModelError(EmptyBatch) when nothing is unmasked.
double loss_classification(std::span<const double> y_hat, std::span<const double> y,
                           std::span<const std::uint8_t> mask = {});

/// sqrt(mean((y - y_hat)^2)) over unmasked entries.
double loss_regression(std::span<const double> y_hat, std::span<const double> y,
                       std::span<const std::uint8_t> mask = {});

/// d loss / d y_hat. Clamped probabilities get zero gradient; masked entries get 0.
std::vector<double> loss_classification_grad(std::span<const double> y_hat, std::span<const double> y,
                                             std::span<const std::uint8_t> mask = {});

/// d RMSE / d y_hat, defined as 0 everywhere when RMSE is 0.
std::vector<double> loss_regression_grad(std::span<const double> y_hat, std::span<const double> y,
                                         std::span<const std::uint8_t> mask = {});

}  // namespace mvmol::model

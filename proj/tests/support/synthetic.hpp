#pragma once

// Generators shared by the unit tests and the acceptance runner.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvmol/common/rng.hpp"
#include "mvmol/model/feature_table.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::testing {

/// Gaussian-ish inputs in [-1, 1]; labels 0/1 for classification, N(0,1)-like
/// reals for regression. Each label is dropped with probability missing_rate,
/// but every row keeps at least one label.
model::FeatureTable random_feature_table(Rng& rng, std::size_t rows, const std::array<std::size_t, 3>& dims,
                                         std::size_t task_count, model::TaskKind kind, double missing_rate = 0.0);

/// Overwrites every parameter (gate included) with uniform(-scale, scale).
void randomize_parameters(model::FusionModel& model, Rng& rng, double scale);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

/// Denominator floor for the relative error, so parameters whose gradient is
/// exactly 0 (dead ReLUs, clamped outputs) compare on absolute error.
inline constexpr double kGradCheckFloor = 1e-6;

/// Compares loss_and_gradient against central differences of batch_loss for
/// every parameter. rel = |a - n| / max(|a|, |n|, kGradCheckFloor).
GradCheckResult finite_difference_check(const model::FusionModel& model, const model::FeatureTable& data,
                                        std::span<const std::size_t> batch, double h = 1e-5);

/// Random drug-like SMILES assembled from ring, linker and substituent
/// fragments. A quarter are acyclic; ring systems vary enough that a
/// few hundred draws give dozens of distinct scaffolds.
std::string random_smiles(Rng& rng);

/// n draws of random_smiles, duplicates removed, in draw order.
std::vector<std::string> random_molecules(Rng& rng, std::size_t n);

}  // namespace mvmol::testing

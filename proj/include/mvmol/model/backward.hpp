#pragma once

#include <span>

#include "mvmol/model/feature_table.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {

struct LossAndGradient {
  double loss = 0.0;
  FusionModel grad;            // same shapes as the model
  std::size_t label_count = 0;  // unmasked entries that entered the loss
};

/// Task loss over the batch rows (cross entropy for sigmoid heads, RMSE for the
/// linear head) and its exact gradient with respect to every parameter.
LossAndGradient loss_and_gradient(const FusionModel& model, const FeatureTable& data,
                                  std::span<const std::size_t> batch);

/// Loss only; the same value loss_and_gradient reports.
double batch_loss(const FusionModel& model, const FeatureTable& data, std::span<const std::size_t> batch);

}  // namespace mvmol::model

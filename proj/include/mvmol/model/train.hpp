#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvmol/model/feature_table.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {

struct TrainConfig {
  std::uint64_t seed = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 200;
  std::size_t patience = 20;
  double init_scale = 1.0;
  std::size_t hidden_dim = 256;
  std::vector<std::size_t> mlp_widths{128};

  /// Throws ModelError(InvalidConfig). A learning rate of 0 is allowed (frozen run).
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_metric = 0.0;
  bool improved = false;
  double wall_ms = 0.0;   // kept out of the deterministic log line
};

struct TrainResult {
  FusionModel model;  // best-validation weights
  std::vector<EpochRecord> log;
  std::size_t best_epoch = 0;
  double best_metric = 0.0;
  std::string metric_name;  // "roc_auc", "rmse" or "neg_loss"
  bool stopped_early = false;
};

/// Validation score used for early stopping. Classification: mean ROC-AUC over
/// tasks that have both classes (negative loss if none do); regression: RMSE.
double validation_metric(const FusionModel& model, const FeatureTable& data, std::string* name = nullptr);
bool metric_improves(const std::string& metric_name, double candidate, double best);

/// Adam on shuffled mini-batches with early stopping. Deterministic given
/// config.seed: the shuffle stream is seeded once and nothing reads the clock
/// except wall_ms. Throws ModelError(DivergedLoss) on a non-finite batch loss.
TrainResult train(FusionModel model, const FeatureTable& train_data, const FeatureTable& valid_data,
                  const TrainConfig& config);

/// One JSON object per epoch without wall time, so logs compare byte for byte.
std::string log_line(const EpochRecord& record, const std::string& metric_name);

}  // namespace mvmol::model

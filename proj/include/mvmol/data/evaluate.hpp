#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/model/feature_table.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::data {

struct TaskMetric {
  std::string task;
  std::size_t labeled = 0;
  std::optional<double> value;  // empty when the task is not evaluable
  std::string flag;             // "single_class" or "no_labels" when not evaluable
};

struct MetricsReport {
  std::string metric;  // "roc_auc" or "rmse"
  std::vector<TaskMetric> tasks;
  std::optional<double> mean;  // over evaluable tasks
  std::size_t evaluable = 0;
};

/// Per-task metric over unmasked entries of predictions (rows x tasks).
MetricsReport evaluate_predictions(model::TaskKind kind, const std::vector<std::string>& task_names,
                                   const model::Matrix& predictions, const model::FeatureTable& data);

MetricsReport evaluate_model(const model::FusionModel& model, const model::FeatureTable& data,
                             const std::vector<std::string>& task_names);

struct SeedSummary {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

SeedSummary summarize_seeds(std::span<const double> values);

/// Stable field order: metric, mean, evaluable, tasks[{task, labeled, value, flag}].
nlohmann::ordered_json report_to_json(const MetricsReport& report);

}  // namespace mvmol::data

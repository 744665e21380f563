#include "mvmol/data/evaluate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mvmol/data/metrics.hpp"

namespace mvmol::data {

MetricsReport evaluate_predictions(model::TaskKind kind, const std::vector<std::string>& task_names,
                                   const model::Matrix& predictions, const model::FeatureTable& data) {
  const std::size_t tasks = data.task_count();
  if (predictions.rows != data.rows() || predictions.cols != tasks || task_names.size() != tasks) {
    throw std::invalid_argument("evaluate: predictions, labels and task names disagree in shape");
  }
  MetricsReport report;
  report.metric = kind == model::TaskKind::Classification ? "roc_auc" : "rmse";
  double sum = 0.0;
  for (std::size_t t = 0; t < tasks; ++t) {
    std::vector<double> scores, targets;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      if (!data.mask[r * tasks + t]) continue;
      scores.push_back(predictions(r, t));
      targets.push_back(data.targets(r, t));
    }
    TaskMetric m{task_names[t], scores.size(), std::nullopt, ""};
    if (scores.empty()) {
      m.flag = "no_labels";
    } else if (kind == model::TaskKind::Regression) {
      m.value = rmse_metric(scores, targets);
    } else {
      std::vector<int> labels(targets.begin(), targets.end());
      try {
        m.value = roc_auc(scores, labels);
      } catch (const SingleClassError&) {
        m.flag = "single_class";
      }
    }
    if (m.value) {
      sum += *m.value;
      ++report.evaluable;
    }
    report.tasks.push_back(std::move(m));
  }
  if (report.evaluable > 0) report.mean = sum / static_cast<double>(report.evaluable);
  return report;
}

MetricsReport evaluate_model(const model::FusionModel& model, const model::FeatureTable& data,
                             const std::vector<std::string>& task_names) {
  model::Matrix predictions(data.rows(), model.task_count);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto y = model::predict(model, data.input(r)).y_hat;
    std::copy(y.begin(), y.end(), predictions.row(r).begin());
  }
  return evaluate_predictions(model.task_kind(), task_names, predictions, data);
}

SeedSummary summarize_seeds(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize_seeds: no values");
  SeedSummary s;
  s.values.assign(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["metric"] = report.metric;
  j["mean"] = report.mean ? nlohmann::ordered_json(*report.mean) : nlohmann::ordered_json(nullptr);
  j["evaluable"] = report.evaluable;
  j["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : report.tasks) {
    nlohmann::ordered_json e;
    e["task"] = t.task;
    e["labeled"] = t.labeled;
    e["value"] = t.value ? nlohmann::ordered_json(*t.value) : nlohmann::ordered_json(nullptr);
    if (!t.flag.empty()) e["flag"] = t.flag;
    j["tasks"].push_back(std::move(e));
  }
  return j;
}

}  // namespace mvmol::data

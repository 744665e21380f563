#include "mvmol/model/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <nlohmann/json.hpp>

#include "mvmol/common/rng.hpp"
#include "mvmol/data/metrics.hpp"
#include "mvmol/model/backward.hpp"

namespace mvmol::model {
namespace {

// Separate stream from weight init, which uses the seed directly.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ull;

std::vector<std::span<double>> spans(FusionModel& m) {
  std::vector<std::span<double>> out;
  for_each_parameter(m, [&](const std::string&, std::span<double> p) { out.push_back(p); });
  return out;
}

void invalid(const std::string& what) { throw ModelError(ModelErrorKind::InvalidConfig, what); }

class Adam {
 public:
  Adam(const FusionModel& model, const TrainConfig& c) : m_(zeros_like(model)), v_(zeros_like(model)), c_(c) {}

  void step(FusionModel& model, FusionModel& grad) {
    ++t_;
    const double bc1 = 1.0 - std::pow(c_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(c_.beta2, static_cast<double>(t_));
    auto params = spans(model);
    auto grads = spans(grad);
    auto ms = spans(m_);
    auto vs = spans(v_);
    for (std::size_t b = 0; b < params.size(); ++b) {
      for (std::size_t i = 0; i < params[b].size(); ++i) {
        const double g = grads[b][i];
        ms[b][i] = c_.beta1 * ms[b][i] + (1.0 - c_.beta1) * g;
        vs[b][i] = c_.beta2 * vs[b][i] + (1.0 - c_.beta2) * g * g;
        const double m_hat = ms[b][i] / bc1;
        const double v_hat = vs[b][i] / bc2;
        params[b][i] -= c_.learning_rate * m_hat / (std::sqrt(v_hat) + c_.adam_eps);
      }
    }
  }

 private:
  FusionModel m_, v_;
  const TrainConfig& c_;
  std::uint64_t t_ = 0;
};

std::vector<std::size_t> all_rows(const FeatureTable& t) {
  std::vector<std::size_t> rows(t.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) invalid("learning rate must be >= 0");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) invalid("Adam betas must lie in (0, 1)");
  if (!(adam_eps > 0.0)) invalid("Adam eps must be positive");
  if (batch_size == 0) invalid("batch size must be positive");
  if (max_epochs == 0) invalid("max epochs must be positive");
  if (patience == 0 || patience > max_epochs) invalid("patience must be in [1, max_epochs]");
  if (!(init_scale > 0.0)) invalid("init scale must be positive");
  if (hidden_dim == 0) invalid("hidden dim must be positive");
  for (std::size_t w : mlp_widths) {
    if (w == 0) invalid("MLP widths must be positive");
  }
}

double validation_metric(const FusionModel& model, const FeatureTable& data, std::string* name) {
  if (data.rows() == 0) throw ModelError(ModelErrorKind::EmptyDataset, "validation split is empty");
  const std::size_t t_count = model.task_count;
  std::vector<std::vector<double>> scores(t_count), targets(t_count);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto y_hat = predict(model, data.input(r)).y_hat;
    for (std::size_t t = 0; t < t_count; ++t) {
      if (!data.mask[r * t_count + t]) continue;
      scores[t].push_back(y_hat[t]);
      targets[t].push_back(data.targets(r, t));
    }
  }
  if (model.task_kind() == TaskKind::Regression) {
    if (name) *name = "rmse";
    return data::rmse_metric(scores[0], targets[0]);
  }
  double sum = 0.0;
  std::size_t evaluable = 0;
  for (std::size_t t = 0; t < t_count; ++t) {
    std::vector<int> labels(targets[t].begin(), targets[t].end());
    try {
      sum += data::roc_auc(scores[t], labels);
      ++evaluable;
    } catch (const data::SingleClassError&) {
    }
  }
  if (evaluable == 0) {
    if (name) *name = "neg_loss";
    return -batch_loss(model, data, all_rows(data));
  }
  if (name) *name = "roc_auc";
  return sum / static_cast<double>(evaluable);
}

bool metric_improves(const std::string& metric_name, double candidate, double best) {
  return metric_name == "rmse" ? candidate < best : candidate > best;
}

TrainResult train(FusionModel model, const FeatureTable& train_data, const FeatureTable& valid_data,
                  const TrainConfig& config) {
  config.validate();
  validate_shapes(model);
  if (train_data.rows() == 0) throw ModelError(ModelErrorKind::EmptyDataset, "training split is empty");
  if (valid_data.rows() == 0) throw ModelError(ModelErrorKind::EmptyDataset, "validation split is empty");

  Rng shuffle_rng(config.seed ^ kShuffleStream);
  Adam adam(model, config);
  std::vector<std::size_t> order = all_rows(train_data);
  const std::vector<std::size_t> valid_rows = all_rows(valid_data);

  TrainResult result;
  result.model = model;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t label_sum = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + lo, hi - lo);
      LossAndGradient lg;
      try {
        lg = loss_and_gradient(model, train_data, batch);
      } catch (const ModelError& e) {
        if (e.kind() == ModelErrorKind::EmptyBatch) continue;  // all labels masked in this batch
        throw;
      }
      if (!std::isfinite(lg.loss)) {
        throw ModelError(ModelErrorKind::DivergedLoss,
                         "non-finite training loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                             std::to_string(lo) + " (learning rate " + std::to_string(config.learning_rate) +
                             ")");
      }
      loss_sum += lg.loss * static_cast<double>(lg.label_count);
      label_sum += lg.label_count;
      adam.step(model, lg.grad);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = label_sum ? loss_sum / static_cast<double>(label_sum) : 0.0;
    rec.valid_loss = batch_loss(model, valid_data, valid_rows);
    std::string metric_name;
    rec.valid_metric = validation_metric(model, valid_data, &metric_name);
    if (!std::isfinite(rec.valid_loss) || !std::isfinite(rec.valid_metric)) {
      throw ModelError(ModelErrorKind::DivergedLoss, "non-finite validation loss at epoch " + std::to_string(epoch));
    }
    if (result.metric_name.empty()) result.metric_name = metric_name;
    rec.improved = epoch == 1 || metric_improves(result.metric_name, rec.valid_metric, result.best_metric);
    if (rec.improved) {
      result.best_metric = rec.valid_metric;
      result.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else {
      ++since_best;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(rec);
    if (since_best >= config.patience) {
      result.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  return result;
}

std::string log_line(const EpochRecord& r, const std::string& metric_name) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["train_loss"] = r.train_loss;
  j["valid_loss"] = r.valid_loss;
  j["metric"] = metric_name;
  j["valid_metric"] = r.valid_metric;
  j["improved"] = r.improved;
  return j.dump();
}

}  // namespace mvmol::model

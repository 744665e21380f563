#include "mvmol/model/backward.hpp"

#include <cmath>

#include "mvmol/model/loss.hpp"

namespace mvmol::model {
namespace {

// Everything the backward pass needs from one forward pass.
struct Trace {
  Projections p;
  std::array<double, kViewCount> alpha{};
  std::vector<std::vector<double>> inputs;  // inputs[l] feeds layer l; inputs[0] is z_fused
  std::vector<std::vector<double>> pre;     // pre-activations per layer
  std::vector<double> y_hat;
};

Trace forward(const FusionModel& m, const ViewInput& in) {
  Trace t;
  t.p = project_views(m, in);
  t.alpha = gate(m, t.p);
  t.inputs.push_back(fuse(t.alpha, t.p));
  for (const auto& layer : m.layers) {
    const auto& h = t.inputs.back();
    std::vector<double> a(layer.weight.rows), out(layer.weight.rows);
    for (std::size_t r = 0; r < layer.weight.rows; ++r) {
      double s = layer.bias[r];
      const auto row = layer.weight.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * h[c];
      a[r] = s;
      out[r] = layer.activation == Activation::Relu && s < 0.0 ? 0.0 : s;
    }
    t.pre.push_back(std::move(a));
    t.inputs.push_back(std::move(out));
  }
  t.y_hat = t.inputs.back();
  t.inputs.pop_back();
  if (m.task_kind() == TaskKind::Classification) {
    for (double& x : t.y_hat) x = 1.0 / (1.0 + std::exp(-x));
  }
  return t;
}

// Accumulates d loss / d params for one sample into g, given d loss / d y_hat.
void backward(const FusionModel& m, const ViewInput& in, const Trace& t, std::span<const double> dy_hat,
              FusionModel& g) {
  const std::size_t d = m.hidden_dim;
  std::vector<double> delta(dy_hat.begin(), dy_hat.end());
  if (m.task_kind() == TaskKind::Classification) {
    for (std::size_t k = 0; k < delta.size(); ++k) delta[k] *= t.y_hat[k] * (1.0 - t.y_hat[k]);
  }

  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const Layer& layer = m.layers[l];
    Layer& gl = g.layers[l];
    if (layer.activation == Activation::Relu) {
      for (std::size_t r = 0; r < delta.size(); ++r) {
        if (!(t.pre[l][r] > 0.0)) delta[r] = 0.0;
      }
    }
    const auto& h = t.inputs[l];
    std::vector<double> dh(layer.weight.cols, 0.0);
    for (std::size_t r = 0; r < layer.weight.rows; ++r) {
      const double dr = delta[r];
      if (dr == 0.0) continue;
      gl.bias[r] += dr;
      auto grow = gl.weight.row(r);
      const auto wrow = layer.weight.row(r);
      for (std::size_t c = 0; c < h.size(); ++c) {
        grow[c] += dr * h[c];
        dh[c] += dr * wrow[c];
      }
    }
    delta = std::move(dh);
  }
  const std::vector<double>& dfused = delta;

  // Fusion: z = sum_v alpha_v p_v.
  std::array<double, kViewCount> dalpha{};
  Projections dp;
  for (std::size_t v = 0; v < kViewCount; ++v) {
    dp[v].assign(d, 0.0);
    if (!m.active[v]) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      s += dfused[i] * t.p[v][i];
      dp[v][i] = t.alpha[v] * dfused[i];
    }
    dalpha[v] = s;
  }

  // Masked softmax: dlogit_k = alpha_k (dalpha_k - sum_j alpha_j dalpha_j).
  double weighted = 0.0;
  for (std::size_t v = 0; v < kViewCount; ++v) weighted += t.alpha[v] * dalpha[v];
  std::array<double, kViewCount> dlogit{};
  for (std::size_t k = 0; k < kViewCount; ++k) {
    dlogit[k] = m.active[k] ? t.alpha[k] * (dalpha[k] - weighted) : 0.0;
  }

  // Gate: logits = G concat(p) + b.
  for (std::size_t k = 0; k < kViewCount; ++k) {
    g.gate_bias[k] += dlogit[k];
    if (dlogit[k] == 0.0) continue;
    auto grow = g.gate_weight.row(k);
    const auto wrow = m.gate_weight.row(k);
    for (std::size_t v = 0; v < kViewCount; ++v) {
      for (std::size_t i = 0; i < d; ++i) {
        grow[v * d + i] += dlogit[k] * t.p[v][i];
        if (m.active[v]) dp[v][i] += dlogit[k] * wrow[v * d + i];
      }
    }
  }

  // Projections: p_v = W_v z_v + b_v.
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (!m.active[v]) continue;
    const auto z = in.z[v];
    for (std::size_t r = 0; r < d; ++r) {
      const double dr = dp[v][r];
      g.proj_bias[v][r] += dr;
      if (dr == 0.0) continue;
      auto grow = g.proj_weight[v].row(r);
      for (std::size_t c = 0; c < z.size(); ++c) grow[c] += dr * z[c];
    }
  }
}

struct BatchPass {
  std::vector<Trace> traces;
  std::vector<double> y_hat, y;
  std::vector<std::uint8_t> mask;
};

BatchPass run_batch(const FusionModel& model, const FeatureTable& data, std::span<const std::size_t> batch) {
  if (batch.empty()) throw ModelError(ModelErrorKind::EmptyBatch, "empty batch");
  if (data.task_count() != model.task_count) {
    throw ModelError(ModelErrorKind::ShapeMismatch, "label width differs from model task count");
  }
  BatchPass pass;
  const std::size_t t_count = model.task_count;
  for (std::size_t row : batch) {
    pass.traces.push_back(forward(model, data.input(row)));
    const auto& yh = pass.traces.back().y_hat;
    pass.y_hat.insert(pass.y_hat.end(), yh.begin(), yh.end());
    for (std::size_t t = 0; t < t_count; ++t) {
      pass.y.push_back(data.targets(row, t));
      pass.mask.push_back(data.mask[row * t_count + t]);
    }
  }
  return pass;
}

std::size_t count_labels(const std::vector<std::uint8_t>& mask) {
  std::size_t n = 0;
  for (auto m : mask) n += m != 0;
  return n;
}

}  // namespace

LossAndGradient loss_and_gradient(const FusionModel& model, const FeatureTable& data,
                                  std::span<const std::size_t> batch) {
  const BatchPass pass = run_batch(model, data, batch);
  LossAndGradient out;
  out.grad = zeros_like(model);
  out.label_count = count_labels(pass.mask);
  std::vector<double> dy;
  if (model.task_kind() == TaskKind::Classification) {
    out.loss = loss_classification(pass.y_hat, pass.y, pass.mask);
    dy = loss_classification_grad(pass.y_hat, pass.y, pass.mask);
  } else {
    out.loss = loss_regression(pass.y_hat, pass.y, pass.mask);
    dy = loss_regression_grad(pass.y_hat, pass.y, pass.mask);
  }
  const std::size_t t_count = model.task_count;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    backward(model, data.input(batch[i]), pass.traces[i], std::span(dy).subspan(i * t_count, t_count), out.grad);
  }
  return out;
}

double batch_loss(const FusionModel& model, const FeatureTable& data, std::span<const std::size_t> batch) {
  const BatchPass pass = run_batch(model, data, batch);
  return model.task_kind() == TaskKind::Classification ? loss_classification(pass.y_hat, pass.y, pass.mask)
                                                      : loss_regression(pass.y_hat, pass.y, pass.mask);
}

}  // namespace mvmol::model

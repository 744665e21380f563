#include "mvmol/model/fusion_model.hpp"

#include <algorithm>
#include <cmath>

#include "mvmol/common/rng.hpp"

namespace mvmol::model {

std::string_view view_name(std::size_t view) {
  static constexpr std::string_view kNames[kViewCount] = {"structure", "task", "rule"};
  return kNames[view];
}

std::string_view to_string(TaskKind kind) {
  return kind == TaskKind::Classification ? "classification" : "regression";
}

std::string_view to_string(HeadKind kind) {
  switch (kind) {
    case HeadKind::SigmoidScalar: return "sigmoid_scalar";
    case HeadKind::LinearScalar: return "linear_scalar";
    case HeadKind::SigmoidMultitask: return "sigmoid_multitask";
  }
  return "";
}

std::string_view to_string(Activation act) { return act == Activation::Relu ? "relu" : "identity"; }

TaskKind parse_task_kind(std::string_view text) {
  if (text == "classification") return TaskKind::Classification;
  if (text == "regression") return TaskKind::Regression;
  throw ModelError(ModelErrorKind::InvalidConfig, "unknown task kind '" + std::string(text) + "'");
}

HeadKind parse_head_kind(std::string_view text) {
  for (HeadKind k : {HeadKind::SigmoidScalar, HeadKind::LinearScalar, HeadKind::SigmoidMultitask}) {
    if (text == to_string(k)) return k;
  }
  throw ModelError(ModelErrorKind::BadCheckpoint, "unknown head '" + std::string(text) + "'");
}

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::Relu;
  if (text == "identity") return Activation::Identity;
  throw ModelError(ModelErrorKind::BadCheckpoint, "unknown activation '" + std::string(text) + "'");
}

std::string_view to_string(ModelErrorKind kind) {
  switch (kind) {
    case ModelErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ModelErrorKind::EmptyBatch: return "EmptyBatch";
    case ModelErrorKind::DivergedLoss: return "DivergedLoss";
    case ModelErrorKind::EmptyDataset: return "EmptyDataset";
    case ModelErrorKind::BadCheckpoint: return "BadCheckpoint";
    case ModelErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "ModelError";
}

ModelError::ModelError(ModelErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::size_t FusionModel::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

namespace {

void glorot(Matrix& m, Rng& rng, double scale) {
  const double bound = scale * std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
  for (double& w : m.data) w = rng.uniform(-bound, bound);
}

void shape_error(const std::string& what) { throw ModelError(ModelErrorKind::ShapeMismatch, what); }

}  // namespace

FusionModel initialize_model(const ModelShape& shape, std::uint64_t seed, double init_scale) {
  if (shape.hidden_dim == 0 || shape.task_count == 0) {
    throw ModelError(ModelErrorKind::InvalidConfig, "hidden dim and task count must be positive");
  }
  if (std::none_of(shape.active.begin(), shape.active.end(), [](bool b) { return b; })) {
    throw ModelError(ModelErrorKind::InvalidConfig, "at least one view must be enabled");
  }
  if (shape.head != HeadKind::SigmoidMultitask && shape.task_count != 1) {
    throw ModelError(ModelErrorKind::InvalidConfig, "scalar heads take exactly one task");
  }
  FusionModel m;
  m.hidden_dim = shape.hidden_dim;
  m.input_dims = shape.input_dims;
  m.active = shape.active;
  m.head = shape.head;
  m.task_count = shape.task_count;
  const std::size_t d = shape.hidden_dim;

  Rng rng(seed);
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (!m.active[v]) {
      m.input_dims[v] = 0;
      continue;
    }
    if (m.input_dims[v] == 0) {
      throw ModelError(ModelErrorKind::InvalidConfig, std::string(view_name(v)) + " view has width 0");
    }
    m.proj_weight[v] = Matrix(d, m.input_dims[v]);
    glorot(m.proj_weight[v], rng, init_scale);
    m.proj_bias[v].assign(d, 0.0);
  }
  m.gate_weight = Matrix(kViewCount, kViewCount * d);
  m.gate_bias.assign(kViewCount, 0.0);

  std::size_t in = d;
  for (std::size_t width : shape.mlp_widths) {
    if (width == 0) throw ModelError(ModelErrorKind::InvalidConfig, "MLP widths must be positive");
    Layer layer{Matrix(width, in), std::vector<double>(width, 0.0), Activation::Relu};
    glorot(layer.weight, rng, init_scale);
    m.layers.push_back(std::move(layer));
    in = width;
  }
  Layer out{Matrix(shape.task_count, in), std::vector<double>(shape.task_count, 0.0), Activation::Identity};
  glorot(out.weight, rng, init_scale);
  m.layers.push_back(std::move(out));
  return m;
}

FusionModel zeros_like(const FusionModel& model) {
  FusionModel z = model;
  for_each_parameter(z, [](const std::string&, std::span<double> p) { std::fill(p.begin(), p.end(), 0.0); });
  return z;
}

void for_each_parameter(FusionModel& m, const std::function<void(const std::string&, std::span<double>)>& fn) {
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (!m.active[v]) continue;
    const std::string base = "proj." + std::string(view_name(v));
    fn(base + ".weight", m.proj_weight[v].data);
    fn(base + ".bias", m.proj_bias[v]);
  }
  fn("gate.weight", m.gate_weight.data);
  fn("gate.bias", m.gate_bias);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    fn("mlp." + std::to_string(l) + ".weight", m.layers[l].weight.data);
    fn("mlp." + std::to_string(l) + ".bias", m.layers[l].bias);
  }
}

void for_each_parameter(const FusionModel& m,
                        const std::function<void(const std::string&, std::span<const double>)>& fn) {
  for_each_parameter(const_cast<FusionModel&>(m),
                     [&](const std::string& name, std::span<double> p) { fn(name, p); });
}

std::size_t parameter_count(const FusionModel& model) {
  std::size_t n = 0;
  for_each_parameter(model, [&](const std::string&, std::span<const double> p) { n += p.size(); });
  return n;
}

void validate_shapes(const FusionModel& m) {
  const std::size_t d = m.hidden_dim;
  if (d == 0) shape_error("hidden dim is 0");
  if (m.active_count() == 0) shape_error("no active views");
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (!m.active[v]) {
      if (!m.proj_weight[v].empty() || !m.proj_bias[v].empty()) {
        shape_error(std::string(view_name(v)) + " view is disabled but has a projection");
      }
      continue;
    }
    if (m.proj_weight[v].rows != d || m.proj_weight[v].cols != m.input_dims[v] || m.proj_bias[v].size() != d) {
      shape_error(std::string(view_name(v)) + " projection shape");
    }
  }
  if (m.gate_weight.rows != kViewCount || m.gate_weight.cols != kViewCount * d || m.gate_bias.size() != kViewCount) {
    shape_error("gate shape");
  }
  if (m.layers.empty()) shape_error("no MLP layers");
  std::size_t in = d;
  for (const auto& layer : m.layers) {
    if (layer.weight.cols != in || layer.bias.size() != layer.weight.rows) shape_error("MLP layer shape");
    in = layer.weight.rows;
  }
  if (in != m.task_count) shape_error("output width differs from task count");
  if (m.head != HeadKind::SigmoidMultitask && m.task_count != 1) shape_error("scalar head with several tasks");
}

Projections project_views(const FusionModel& m, const ViewInput& input) {
  Projections p;
  for (std::size_t v = 0; v < kViewCount; ++v) {
    p[v].assign(m.hidden_dim, 0.0);
    if (!m.active[v]) continue;
    const Matrix& w = m.proj_weight[v];
    if (input.z[v].size() != w.cols) {
      shape_error(std::string(view_name(v)) + " input has width " + std::to_string(input.z[v].size()) +
                  ", model expects " + std::to_string(w.cols));
    }
    for (std::size_t r = 0; r < w.rows; ++r) {
      double s = m.proj_bias[v][r];
      const auto row = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c) s += row[c] * input.z[v][c];
      p[v][r] = s;
    }
  }
  return p;
}

std::array<double, kViewCount> gate_logits(const FusionModel& m, const Projections& p) {
  std::array<double, kViewCount> logits{};
  const std::size_t d = m.hidden_dim;
  for (std::size_t k = 0; k < kViewCount; ++k) {
    double s = m.gate_bias[k];
    const auto row = m.gate_weight.row(k);
    for (std::size_t v = 0; v < kViewCount; ++v) {
      for (std::size_t i = 0; i < d; ++i) s += row[v * d + i] * p[v][i];
    }
    logits[k] = s;
  }
  return logits;
}

std::array<double, kViewCount> masked_softmax(const std::array<double, kViewCount>& logits,
                                              const std::array<bool, kViewCount>& active) {
  double max_logit = -INFINITY;
  for (std::size_t k = 0; k < kViewCount; ++k) {
    if (active[k]) max_logit = std::max(max_logit, logits[k]);
  }
  std::array<double, kViewCount> alpha{};
  double sum = 0.0;
  for (std::size_t k = 0; k < kViewCount; ++k) {
    if (!active[k]) continue;
    alpha[k] = std::exp(logits[k] - max_logit);
    sum += alpha[k];
  }
  for (double& a : alpha) a /= sum;
  return alpha;
}

std::array<double, kViewCount> gate(const FusionModel& m, const Projections& p) {
  return masked_softmax(gate_logits(m, p), m.active);
}

std::vector<double> fuse(const std::array<double, kViewCount>& alpha, const Projections& p) {
  std::vector<double> z(p[0].size(), 0.0);
  for (std::size_t v = 0; v < kViewCount; ++v) {
    if (p[v].size() != z.size()) shape_error("projections differ in width");
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += alpha[v] * p[v][i];
  }
  return z;
}

std::vector<double> mlp_forward(const FusionModel& m, std::span<const double> fused) {
  std::vector<double> h(fused.begin(), fused.end());
  for (const auto& layer : m.layers) {
    if (h.size() != layer.weight.cols) shape_error("MLP input width");
    std::vector<double> next(layer.weight.rows);
    for (std::size_t r = 0; r < layer.weight.rows; ++r) {
      double s = layer.bias[r];
      const auto row = layer.weight.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * h[c];
      next[r] = layer.activation == Activation::Relu && s < 0.0 ? 0.0 : s;  // NaN passes through
    }
    h = std::move(next);
  }
  if (m.task_kind() == TaskKind::Classification) {
    for (double& x : h) x = 1.0 / (1.0 + std::exp(-x));
  }
  return h;
}

Prediction predict(const FusionModel& model, const ViewInput& input) {
  const Projections p = project_views(model, input);
  Prediction out;
  out.alpha = gate(model, p);
  out.y_hat = mlp_forward(model, fuse(out.alpha, p));
  return out;
}

}  // namespace mvmol::model

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvmol/model/matrix.hpp"

namespace mvmol::model {

inline constexpr std::size_t kViewCount = 3;
enum class ViewId : std::size_t { Structure = 0, Task = 1, Rule = 2 };
std::string_view view_name(std::size_t view);  // "structure", "task", "rule"

enum class TaskKind { Classification, Regression };
enum class HeadKind { SigmoidScalar, LinearScalar, SigmoidMultitask };
enum class Activation { Relu, Identity };

std::string_view to_string(TaskKind kind);
std::string_view to_string(HeadKind kind);
std::string_view to_string(Activation act);
TaskKind parse_task_kind(std::string_view text);
HeadKind parse_head_kind(std::string_view text);
Activation parse_activation(std::string_view text);

enum class ModelErrorKind { ShapeMismatch, EmptyBatch, DivergedLoss, EmptyDataset, BadCheckpoint, InvalidConfig };

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, const std::string& message);
  ModelErrorKind kind() const { return kind_; }

 private:
  ModelErrorKind kind_;
};

std::string_view to_string(ModelErrorKind kind);

struct Layer {
  Matrix weight;  // out x in
  std::vector<double> bias;
  Activation activation = Activation::Relu;
};

/// Projections, gate and MLP. A FusionModel with the same shapes doubles as
/// the gradient container during training.
struct FusionModel {
  std::size_t hidden_dim = 0;                    // d
  std::array<std::size_t, kViewCount> input_dims{};
  std::array<bool, kViewCount> active{true, true, true};
  std::array<Matrix, kViewCount> proj_weight;    // d x D_v; empty when inactive
  std::array<std::vector<double>, kViewCount> proj_bias;
  Matrix gate_weight;                            // 3 x 3d
  std::vector<double> gate_bias;                 // 3
  std::vector<Layer> layers;                     // last layer has task_count outputs, identity
  HeadKind head = HeadKind::SigmoidScalar;
  std::size_t task_count = 1;

  TaskKind task_kind() const {
    return head == HeadKind::LinearScalar ? TaskKind::Regression : TaskKind::Classification;
  }
  std::size_t active_count() const;
};

struct ModelShape {
  std::array<std::size_t, kViewCount> input_dims{};
  std::array<bool, kViewCount> active{true, true, true};
  std::size_t hidden_dim = 256;
  std::vector<std::size_t> mlp_widths{128};
  HeadKind head = HeadKind::SigmoidScalar;
  std::size_t task_count = 1;
};

/// Weights uniform in +-scale*sqrt(6/(fan_in+fan_out)); biases zero; gate zero,
/// so an untrained model weighs active views equally.
FusionModel initialize_model(const ModelShape& shape, std::uint64_t seed, double init_scale = 1.0);

/// Same shapes, all zeros.
FusionModel zeros_like(const FusionModel& model);

/// Visits every parameter tensor in checkpoint order; inactive projections are skipped.
void for_each_parameter(FusionModel& model, const std::function<void(const std::string&, std::span<double>)>& fn);
void for_each_parameter(const FusionModel& model,
                        const std::function<void(const std::string&, std::span<const double>)>& fn);
std::size_t parameter_count(const FusionModel& model);

/// Throws ModelError(ShapeMismatch) if any shape disagrees with the declared widths.
void validate_shapes(const FusionModel& model);

// ---- forward pieces --------------------------------------------------------

struct ViewInput {
  std::array<std::span<const double>, kViewCount> z;  // inactive views may be empty
};

using Projections = std::array<std::vector<double>, kViewCount>;

/// p_v = W_v z_v + b_v; inactive views project to zeros.
Projections project_views(const FusionModel& model, const ViewInput& input);

std::array<double, kViewCount> gate_logits(const FusionModel& model, const Projections& p);

/// Softmax restricted to active slots; inactive slots get exactly 0.
std::array<double, kViewCount> masked_softmax(const std::array<double, kViewCount>& logits,
                                              const std::array<bool, kViewCount>& active);

std::array<double, kViewCount> gate(const FusionModel& model, const Projections& p);

std::vector<double> fuse(const std::array<double, kViewCount>& alpha, const Projections& p);

/// Hidden layers then head: sigmoid per task for classification, identity for regression.
std::vector<double> mlp_forward(const FusionModel& model, std::span<const double> fused);

struct Prediction {
  std::vector<double> y_hat;
  std::array<double, kViewCount> alpha{};
};

Prediction predict(const FusionModel& model, const ViewInput& input);

}  // namespace mvmol::model

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {

/// Per-molecule model inputs and labels, one row per molecule.
struct FeatureTable {
  std::array<Matrix, kViewCount> views;  // an inactive view may be 0 columns wide
  Matrix targets;                        // rows x task_count
  std::vector<std::uint8_t> mask;        // rows * task_count, 1 = label present

  std::size_t rows() const { return targets.rows; }
  std::size_t task_count() const { return targets.cols; }

  ViewInput input(std::size_t row) const {
    ViewInput in;
    for (std::size_t v = 0; v < kViewCount; ++v) {
      if (views[v].cols > 0) in.z[v] = views[v].row(row);
    }
    return in;
  }

  /// Rows picked by index, in the given order.
  FeatureTable subset(const std::vector<std::size_t>& indices) const {
    FeatureTable out;
    for (std::size_t v = 0; v < kViewCount; ++v) {
      out.views[v] = Matrix(indices.size(), views[v].cols);
      for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = views[v].row(indices[i]);
        std::copy(src.begin(), src.end(), out.views[v].row(i).begin());
      }
    }
    out.targets = Matrix(indices.size(), targets.cols);
    out.mask.assign(indices.size() * targets.cols, 0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      for (std::size_t t = 0; t < targets.cols; ++t) {
        out.targets(i, t) = targets(indices[i], t);
        out.mask[i * targets.cols + t] = mask[indices[i] * targets.cols + t];
      }
    }
    return out;
  }
};

}  // namespace mvmol::model

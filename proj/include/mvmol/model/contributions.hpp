#pragma once

#include <array>
#include <vector>

#include "mvmol/model/feature_table.hpp"
#include "mvmol/model/fusion_model.hpp"

namespace mvmol::model {

struct ContributionReport {
  std::array<double, kViewCount> mean{};                    // structure, task, rule
  std::vector<std::array<double, kViewCount>> per_molecule;  // gate weights per row
  std::array<bool, kViewCount> active{};
};

/// Arithmetic mean of the gate weights over all rows. Throws ModelError(EmptyDataset).
ContributionReport component_contributions(const FusionModel& model, const FeatureTable& data);

}  // namespace mvmol::model

#include "mvmol/model/contributions.hpp"

namespace mvmol::model {

ContributionReport component_contributions(const FusionModel& model, const FeatureTable& data) {
  if (data.rows() == 0) throw ModelError(ModelErrorKind::EmptyDataset, "no molecules to score");
  ContributionReport report;
  report.active = model.active;
  report.per_molecule.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto alpha = gate(model, project_views(model, data.input(r)));
    report.per_molecule.push_back(alpha);
    for (std::size_t v = 0; v < kViewCount; ++v) report.mean[v] += alpha[v];
  }
  for (double& m : report.mean) m /= static_cast<double>(data.rows());
  return report;
}

}  // namespace mvmol::model

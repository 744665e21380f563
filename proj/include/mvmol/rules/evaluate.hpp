#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mvmol/chem/molecule.hpp"
#include "mvmol/rules/ruleset.hpp"

namespace mvmol::rules {

/// Feature vector for one molecule; values[i] belongs to ruleset.rules[i].
struct RuleFeatureVector {
  std::vector<double> values;
  bool normalization_applied = false;
};

using ExternalValues = std::map<std::string, double, std::less<>>;

/// Predicates yield exactly 0.0 or 1.0; numeric rules their finite value.
/// Throws RuleError(MissingExternal) naming the first declared external absent
/// from externals, and RuleError(NonFiniteResult) naming the rule.
RuleFeatureVector evaluate_rules(const RuleSet& ruleset, const chem::Molecule& mol,
                                 const ExternalValues& externals);

}  // namespace mvmol::rules

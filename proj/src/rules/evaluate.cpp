#include "mvmol/rules/evaluate.hpp"

#include <cmath>
#include <unordered_map>

#include "mvmol/chem/descriptors.hpp"
#include "mvmol/chem/substructure.hpp"

namespace mvmol::rules {
namespace {

class Evaluator {
 public:
  Evaluator(const chem::Molecule& mol, const ExternalValues& externals)
      : mol_(mol), externals_(externals), descriptors_(chem::compute_descriptors(mol)) {}

  double eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Number: return e.number;
      case ExprKind::Descriptor: return descriptors_[e.descriptor];
      case ExprKind::External: return externals_.find(e.name)->second;
      case ExprKind::Substructure: return match_count(e) > 0 ? 1.0 : 0.0;
      case ExprKind::SubstructureCount: return static_cast<double>(match_count(e));
      case ExprKind::Less: return truth(eval(*e.args[0]) < eval(*e.args[1]));
      case ExprKind::LessEqual: return truth(eval(*e.args[0]) <= eval(*e.args[1]));
      case ExprKind::Greater: return truth(eval(*e.args[0]) > eval(*e.args[1]));
      case ExprKind::GreaterEqual: return truth(eval(*e.args[0]) >= eval(*e.args[1]));
      case ExprKind::Equal: return truth(eval(*e.args[0]) == eval(*e.args[1]));
      case ExprKind::NotEqual: return truth(eval(*e.args[0]) != eval(*e.args[1]));
      case ExprKind::And: return truth(eval(*e.args[0]) != 0.0 && eval(*e.args[1]) != 0.0);
      case ExprKind::Or: return truth(eval(*e.args[0]) != 0.0 || eval(*e.args[1]) != 0.0);
      case ExprKind::Not: return truth(eval(*e.args[0]) == 0.0);
      case ExprKind::Add: return eval(*e.args[0]) + eval(*e.args[1]);
      case ExprKind::Subtract: return eval(*e.args[0]) - eval(*e.args[1]);
      case ExprKind::Multiply: return eval(*e.args[0]) * eval(*e.args[1]);
      case ExprKind::Divide: return eval(*e.args[0]) / eval(*e.args[1]);
      case ExprKind::Negate: return -eval(*e.args[0]);
    }
    return 0.0;
  }

 private:
  static double truth(bool b) { return b ? 1.0 : 0.0; }

  std::size_t match_count(const Expr& e) {
    auto it = matches_.find(e.pattern.get());
    if (it != matches_.end()) return it->second;
    const std::size_t count = chem::match_substructure(*e.pattern, mol_).count;
    matches_.emplace(e.pattern.get(), count);
    return count;
  }

  const chem::Molecule& mol_;
  const ExternalValues& externals_;
  chem::DescriptorSet descriptors_;
  std::unordered_map<const chem::Molecule*, std::size_t> matches_;
};

bool references(const Expr& e, std::string_view external) {
  if (e.kind == ExprKind::External) return e.name == external;
  for (const auto& a : e.args) {
    if (references(*a, external)) return true;
  }
  return false;
}

}  // namespace

RuleFeatureVector evaluate_rules(const RuleSet& ruleset, const chem::Molecule& mol,
                                 const ExternalValues& externals) {
  for (const auto& ext : ruleset.externals) {
    if (!externals.count(ext.id)) {
      std::string user = "no rule";
      for (const auto& rule : ruleset.rules) {
        if (references(*rule.expression, ext.id)) {
          user = "rule '" + rule.id + "'";
          break;
        }
      }
      throw RuleError(RuleErrorKind::MissingExternal, ext.id,
                      user + " needs external descriptor '" + ext.id + "', which has no value");
    }
  }
  RuleFeatureVector out;
  out.values.reserve(ruleset.size());
  if (ruleset.empty()) return out;
  Evaluator evaluator(mol, externals);
  for (const auto& rule : ruleset.rules) {
    const double value = evaluator.eval(*rule.expression);
    if (!std::isfinite(value)) {
      throw RuleError(RuleErrorKind::NonFiniteResult, rule.id,
                      "rule '" + rule.id + "' produced a non-finite value");
    }
    out.values.push_back(value);
  }
  return out;
}

}  // namespace mvmol::rules

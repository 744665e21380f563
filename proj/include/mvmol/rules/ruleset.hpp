#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/rules/expression.hpp"

namespace mvmol::rules {

enum class RuleKind { Predicate, Numeric };
enum class Provenance { Scientific, DataPattern };

std::string_view to_string(RuleKind kind);
std::string_view to_string(Provenance provenance);

struct Rule {
  std::string id;
  RuleKind kind = RuleKind::Predicate;
  ExprPtr expression;
  Provenance provenance = Provenance::Scientific;
};

struct ExternalDescriptor {
  std::string id;
  std::string unit;
};

/// Ordered rules; position i is feature index i.
struct RuleSet {
  std::string task_id;
  std::vector<Rule> rules;
  std::vector<ExternalDescriptor> externals;

  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }
};

bool operator==(const RuleSet& a, const RuleSet& b);

enum class RuleErrorKind {
  SyntaxError,
  UnknownDescriptor,
  DuplicateRuleId,
  BadPattern,
  MissingExternal,
  NonFiniteResult,
  StatsMismatch,
  EmptyRuleSet,
  SubsetTooLarge,
};

std::string_view to_string(RuleErrorKind kind);

class RuleError : public std::runtime_error {
 public:
  RuleError(RuleErrorKind kind, std::string subject, const std::string& message,
            std::size_t line = 0, std::size_t column = 0);

  RuleErrorKind kind() const { return kind_; }
  /// Offending identifier, rule id or pattern, depending on kind.
  const std::string& subject() const { return subject_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  RuleErrorKind kind_;
  std::string subject_;
  std::size_t line_;
  std::size_t column_;
};

/// Parses the rule DSL:
///
///   # comment
///   task bbbp
///   external logp unit "log units"
///   provenance data_pattern
///   rule mw_lt_500: molecular_weight < 500
///   rule hbd: numeric hbd_count
///   rule benzene: substructure("c1ccccc1") and not count("C=O") > 2
///
/// Identifiers resolve at parse time against the shipped descriptors and the
/// file's external declarations (declared anywhere in the file).
RuleSet parse_rules(std::string_view source);

/// Canonical DSL text; parse_rules(serialize_rules(r)) == r.
std::string serialize_rules(const RuleSet& ruleset);

nlohmann::ordered_json ruleset_to_json(const RuleSet& ruleset);

}  // namespace mvmol::rules

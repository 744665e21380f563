#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmol/chem/descriptors.hpp"
#include "mvmol/chem/molecule.hpp"

namespace mvmol::rules {

enum class ValueType { Boolean, Numeric };

enum class ExprKind {
  Number,
  Descriptor,
  External,
  Substructure,       // boolean: pattern present
  SubstructureCount,  // numeric: distinct pattern matches
  Less,
  LessEqual,
  Greater,
  GreaterEqual,
  Equal,
  NotEqual,
  And,
  Or,
  Not,
  Add,
  Subtract,
  Multiply,
  Divide,
  Negate,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable rule expression node.
struct Expr {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;
  std::string name;  // identifier, or pattern text for substructure nodes
  chem::DescriptorId descriptor = chem::DescriptorId::MolecularWeight;
  std::shared_ptr<const chem::Molecule> pattern;
  std::vector<ExprPtr> args;

  ValueType type() const;
};

ExprPtr make_number(double value);
ExprPtr make_descriptor(chem::DescriptorId id);
ExprPtr make_external(std::string name);
ExprPtr make_substructure(ExprKind kind, std::string pattern_text,
                          std::shared_ptr<const chem::Molecule> pattern);
ExprPtr make_unary(ExprKind kind, ExprPtr operand);
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);

/// Structural equality; compiled patterns compare by their source text.
bool equal(const Expr& a, const Expr& b);

/// Source text that parses back to a structurally equal tree.
std::string to_source(const Expr& expr);

/// Audit form: {"op": ..., "args": [...]}, {"number": x}, {"descriptor": id}, ...
nlohmann::ordered_json to_json(const Expr& expr);

std::string_view operator_token(ExprKind kind);

}  // namespace mvmol::rules
